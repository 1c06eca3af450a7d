#pragma once

#include <array>
#include <stdexcept>

#include "hvns/spectral_field.hpp"

namespace hvns {

/// Add amp.e^{ik.x} plus its conjugate mirror so the field stays real.
inline void add_mode(SpectralField& u, const std::array<int, 3>& mode,
                     const std::array<complexd, 3>& amp) {
    const WaveGrid& g = u.grid;
    for (int m : mode)
        if (std::abs(m) > g.max_mode)
            throw std::invalid_argument("add_mode: mode outside the dealiased band");
    if (mode[0] == 0 && mode[1] == 0 && mode[2] == 0)
        throw std::invalid_argument("add_mode: zero mode is excluded (zero-mean fields)");
    const std::size_t ip =
        g.flat(g.index_of(mode[0]), g.index_of(mode[1]), g.index_of(mode[2]));
    const std::size_t im =
        g.flat(g.index_of(-mode[0]), g.index_of(-mode[1]), g.index_of(-mode[2]));
    for (int c = 0; c < 3; ++c) {
        u.coeffs[c][ip] += amp[c];
        u.coeffs[c][im] += std::conj(amp[c]);
    }
}

/// u = (A cos(k_unit y), 0, 0); single |k|=k_unit shell, B(u,u) = 0 exactly.
inline SpectralField shear_field(const WaveGrid& g, double amplitude) {
    SpectralField u(g);
    add_mode(u, {0, 1, 0}, {complexd{amplitude / 2.0, 0.0}, 0.0, 0.0});
    return u;
}

/// Taylor-Green vortex A (sin x cos y cos z, -cos x sin y cos z, 0)
/// in box units (x means k_unit * x).
inline SpectralField taylor_green_field(const WaveGrid& g, double amplitude) {
    SpectralField u(g);
    // only the s1 = +1 half; add_mode mirrors in the conjugate modes
    for (int s2 : {-1, 1})
        for (int s3 : {-1, 1})
            add_mode(u, {1, s2, s3},
                     {complexd{0.0, -amplitude / 8.0}, complexd{0.0, amplitude * s2 / 8.0},
                      0.0});
    return u;
}

}  // namespace hvns
