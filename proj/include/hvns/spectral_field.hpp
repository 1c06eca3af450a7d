#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hvns/wave_grid.hpp"

namespace hvns {

using complexd = std::complex<double>;

/// Divergence-free, zero-mean velocity field stored as Fourier coefficients,
/// u(x) = sum_k u_hat(k) e^{i k.x}, one full complex lattice per component.
struct SpectralField {
    WaveGrid grid;
    std::array<std::vector<complexd>, 3> coeffs;

    SpectralField() = default;
    explicit SpectralField(const WaveGrid& g) : grid(g) {
        for (auto& c : coeffs) c.assign(g.size(), complexd{0.0, 0.0});
    }
};

inline SpectralField zero_field(const WaveGrid& g) { return SpectralField(g); }

inline void check_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
}

inline SpectralField& operator+=(SpectralField& a, const SpectralField& b) {
    check_same_grid(a, b);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.coeffs[c].size(); ++i) a.coeffs[c][i] += b.coeffs[c][i];
    return a;
}

inline SpectralField& operator-=(SpectralField& a, const SpectralField& b) {
    check_same_grid(a, b);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.coeffs[c].size(); ++i) a.coeffs[c][i] -= b.coeffs[c][i];
    return a;
}

inline SpectralField& operator*=(SpectralField& a, double s) {
    for (int c = 0; c < 3; ++c)
        for (auto& z : a.coeffs[c]) z *= s;
    return a;
}

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(double s, SpectralField a) { return a *= s; }

/// V0 inner product (u, v) = L^3 sum_k u_hat(k) conj(v_hat(k)); real for real fields.
inline double inner_product(const SpectralField& u, const SpectralField& v) {
    check_same_grid(u, v);
    double acc = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < u.coeffs[c].size(); ++i) {
            const complexd& a = u.coeffs[c][i];
            const complexd& b = v.coeffs[c][i];
            acc += a.real() * b.real() + a.imag() * b.imag();
        }
    return acc * u.grid.volume();
}

/// Sobolev norm ||A^{s/2} u|| via Parseval: (sum_k |k|^{2s} |u_hat|^2 L^3)^{1/2}.
/// s=0 gives ||u||, s=1 gives ||grad u||, s=-2l gives the D(A^l)' dual norm.
/// The k=0 mode is excluded (zero-mean fields), so negative s is well defined.
inline double sobolev_norm(const SpectralField& u, double s) {
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double k2 = g.k_squared(i, j, k);
                if (k2 == 0.0) continue;
                const double w = (s == 0.0) ? 1.0 : std::pow(k2, s);
                const std::size_t id = g.flat(i, j, k);
                double m2 = 0.0;
                for (int c = 0; c < 3; ++c) m2 += std::norm(u.coeffs[c][id]);
                acc += w * m2;
            }
    return std::sqrt(acc * g.volume());
}

/// Spectral Stokes power A^s: per-mode multiplication by |k|^{2s}.
inline SpectralField stokes_power(const SpectralField& u, double s) {
    SpectralField out = u;
    if (s == 0.0) return out;
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double k2 = g.k_squared(i, j, k);
                const std::size_t id = g.flat(i, j, k);
                const double w = (k2 == 0.0) ? 0.0 : std::pow(k2, s);
                for (int c = 0; c < 3; ++c) out.coeffs[c][id] *= w;
            }
    return out;
}

/// Per-mode orthogonal projection onto divergence-free, zero-mean fields:
/// u_hat(k) -> u_hat(k) - k (k.u_hat)/|k|^2, u_hat(0) -> 0.
inline SpectralField leray_project(const SpectralField& u) {
    SpectralField out = u;
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t id = g.flat(i, j, k);
                const double kx = g.k_unit * g.mode_of(i);
                const double ky = g.k_unit * g.mode_of(j);
                const double kz = g.k_unit * g.mode_of(k);
                const double k2 = kx * kx + ky * ky + kz * kz;
                if (k2 == 0.0) {
                    for (int c = 0; c < 3; ++c) out.coeffs[c][id] = 0.0;
                    continue;
                }
                const complexd dot =
                    kx * out.coeffs[0][id] + ky * out.coeffs[1][id] + kz * out.coeffs[2][id];
                const complexd q = dot / k2;
                out.coeffs[0][id] -= kx * q;
                out.coeffs[1][id] -= ky * q;
                out.coeffs[2][id] -= kz * q;
            }
    return out;
}

/// Zero every mode outside the two-thirds mask.
inline void dealias(SpectralField& u) {
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (g.retained(i, j, k)) continue;
                const std::size_t id = g.flat(i, j, k);
                for (int c = 0; c < 3; ++c) u.coeffs[c][id] = 0.0;
            }
}

/// max_k |k.u_hat| / (|k| |u_hat|) over modes with nonzero coefficient
inline double max_divergence_ratio(const SpectralField& u) {
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t id = g.flat(i, j, k);
                const double kx = g.k_unit * g.mode_of(i);
                const double ky = g.k_unit * g.mode_of(j);
                const double kz = g.k_unit * g.mode_of(k);
                const double kn = std::sqrt(kx * kx + ky * ky + kz * kz);
                if (kn == 0.0) continue;
                double m2 = 0.0;
                for (int c = 0; c < 3; ++c) m2 += std::norm(u.coeffs[c][id]);
                if (m2 == 0.0) continue;
                const complexd dot =
                    kx * u.coeffs[0][id] + ky * u.coeffs[1][id] + kz * u.coeffs[2][id];
                worst = std::max(worst, std::abs(dot) / (kn * std::sqrt(m2)));
            }
    return worst;
}

/// max over modes of |u_hat(-k) - conj(u_hat(k))| relative to the field scale
inline double max_hermitian_defect(const SpectralField& u) {
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    double scale = 0.0, worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const auto& z : u.coeffs[c]) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int im = (n - i) % n, jm = (n - j) % n, km = (n - k) % n;
                const std::size_t a = g.flat(i, j, k), b = g.flat(im, jm, km);
                for (int c = 0; c < 3; ++c)
                    worst = std::max(worst, std::abs(u.coeffs[c][b] - std::conj(u.coeffs[c][a])));
            }
    return worst / scale;
}

/// Deterministic solenoidal test field: independent Gaussian coefficients on the
/// retained half-lattice with magnitude ~ amplitude * |k|^{-spectrum_decay},
/// Hermitian-mirrored and Leray-projected. Same seed, same field.
inline SpectralField random_solenoidal_field(const WaveGrid& g, double spectrum_decay,
                                             double amplitude, std::uint64_t seed) {
    if (!(spectrum_decay > 0.0))
        throw std::invalid_argument("random_solenoidal_field: spectrum_decay must be positive");
    SpectralField u(g);
    // splitmix64 + Box-Muller; avoids implementation-defined distributions
    std::uint64_t state = seed;
    auto next_u64 = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    auto next_unit = [&next_u64]() { return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; };
    auto next_gauss = [&next_unit]() {
        const double r = std::sqrt(-2.0 * std::log(next_unit()));
        return r * std::cos(2.0 * M_PI * next_unit());
    };
    const int m = g.max_mode;
    for (int a = -m; a <= m; ++a)
        for (int b = -m; b <= m; ++b)
            for (int c = -m; c <= m; ++c) {
                // one representative per conjugate pair
                const bool upper = (a > 0) || (a == 0 && b > 0) || (a == 0 && b == 0 && c > 0);
                if (!upper) continue;
                const double kmag =
                    g.k_unit * std::sqrt(double(a) * a + double(b) * b + double(c) * c);
                const double mag = amplitude * std::pow(kmag, -spectrum_decay);
                const std::size_t ip = g.flat(g.index_of(a), g.index_of(b), g.index_of(c));
                const std::size_t im = g.flat(g.index_of(-a), g.index_of(-b), g.index_of(-c));
                for (int comp = 0; comp < 3; ++comp) {
                    const complexd z{mag * next_gauss(), mag * next_gauss()};
                    u.coeffs[comp][ip] = z;
                    u.coeffs[comp][im] = std::conj(z);
                }
            }
    return leray_project(u);
}

}  // namespace hvns
