#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hvns {

/// Periodic-box Fourier lattice for a cube of side `period`, with
/// `modes_per_dim` collocation points per direction and a two-thirds
/// dealias mask. Wavenumbers are k = (2*pi/L) * m with integer
/// m in [-N/2, N/2); the mask retains every |m| <= max_mode.
struct WaveGrid {
    int modes_per_dim = 0;
    double period = 0.0;
    double k_unit = 0.0;   // 2*pi/L
    double lambda1 = 0.0;  // (2*pi/L)^2, smallest Stokes eigenvalue on zero-mean fields
    int max_mode = 0;      // largest |integer mode| kept by the dealias mask

    std::size_t size() const {
        const std::size_t n = static_cast<std::size_t>(modes_per_dim);
        return n * n * n;
    }

    // integer mode carried by storage index i in [0, N)
    int mode_of(int i) const { return i <= modes_per_dim / 2 ? i : i - modes_per_dim; }

    // storage index of integer mode m in [-N/2, N/2)
    int index_of(int m) const { return m >= 0 ? m : m + modes_per_dim; }

    std::size_t flat(int i, int j, int k) const {
        const int n = modes_per_dim;
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }

    bool retained(int i, int j, int k) const {
        return std::abs(mode_of(i)) <= max_mode && std::abs(mode_of(j)) <= max_mode &&
               std::abs(mode_of(k)) <= max_mode;
    }

    // squared wavenumber |k|^2 for storage index triple
    double k_squared(int i, int j, int k) const {
        const double a = mode_of(i), b = mode_of(j), c = mode_of(k);
        return k_unit * k_unit * (a * a + b * b + c * c);
    }

    // largest retained |k|, used by the advective CFL bound
    double k_max() const { return k_unit * max_mode * std::sqrt(3.0); }

    double cell_volume() const {
        const double h = period / modes_per_dim;
        return h * h * h;
    }

    double volume() const { return period * period * period; }

    bool operator==(const WaveGrid&) const = default;
};

inline WaveGrid make_grid(int modes_per_dim, double period) {
    if (modes_per_dim < 4 || modes_per_dim % 2 != 0)
        throw std::invalid_argument("make_grid: modes_per_dim must be even and >= 4");
    if (!(period > 0.0))
        throw std::invalid_argument("make_grid: period must be positive");
    WaveGrid g;
    g.modes_per_dim = modes_per_dim;
    g.period = period;
    g.k_unit = 2.0 * M_PI / period;
    g.lambda1 = g.k_unit * g.k_unit;
    g.max_mode = (modes_per_dim - 1) / 3;  // |m| < N/3
    return g;
}

}  // namespace hvns
