#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "hvns/spectral_field.hpp"
#include "hvns/wave_grid.hpp"

namespace hvns {

/// FFTW plan pair for one grid size. Plans are created with FFTW_UNALIGNED so
/// execution on ordinary std::vector storage is valid; fftw_execute_dft on a
/// shared plan is thread-safe, plan creation is serialized by a global mutex.
class SpectralTransform {
  public:
    explicit SpectralTransform(const WaveGrid& g) : n_(g.modes_per_dim) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        std::vector<complexd> a(g.size()), b(g.size());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_3d(n_, n_, n_, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_3d(n_, n_, n_, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD, flags);
    }

    ~SpectralTransform() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    /// synthesis: phys(x_j) = sum_k c(k) e^{i k.x_j}
    void to_physical(const std::vector<complexd>& coeffs, std::vector<complexd>& phys) const {
        phys.resize(coeffs.size());
        fftw_execute_dft(bwd_,
                         reinterpret_cast<fftw_complex*>(const_cast<complexd*>(coeffs.data())),
                         reinterpret_cast<fftw_complex*>(phys.data()));
    }

    /// analysis: c(k) = (1/N^3) sum_j phys(x_j) e^{-i k.x_j}
    void to_spectral(const std::vector<complexd>& phys, std::vector<complexd>& coeffs) const {
        coeffs.resize(phys.size());
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(const_cast<complexd*>(phys.data())),
                         reinterpret_cast<fftw_complex*>(coeffs.data()));
        const double scale = 1.0 / (double(n_) * n_ * n_);
        for (auto& z : coeffs) z *= scale;
    }

    /// shared transform for a grid; plans are cached per lattice size
    static const SpectralTransform& for_grid(const WaveGrid& g) {
        static std::mutex reg_mutex;
        static std::map<int, std::unique_ptr<SpectralTransform>> registry;
        std::lock_guard<std::mutex> lock(reg_mutex);
        auto& slot = registry[g.modes_per_dim];
        if (!slot) slot = std::make_unique<SpectralTransform>(g);
        return *slot;
    }

  private:
    static std::mutex& plan_mutex() {
        static std::mutex m;
        return m;
    }

    int n_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

}  // namespace hvns
