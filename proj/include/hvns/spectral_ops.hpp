#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hvns/spectral_field.hpp"
#include "hvns/transform.hpp"

namespace hvns {

/// spectral derivative d/dx_axis: multiply by i k_axis
inline std::vector<complexd> derivative_coeffs(const SpectralField& u, int comp, int axis) {
    const WaveGrid& g = u.grid;
    const int n = g.modes_per_dim;
    std::vector<complexd> out(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int m = axis == 0 ? g.mode_of(i) : axis == 1 ? g.mode_of(j) : g.mode_of(k);
                const std::size_t id = g.flat(i, j, k);
                out[id] = complexd{0.0, g.k_unit * m} * u.coeffs[comp][id];
            }
    return out;
}

/// collocation values of all three velocity components
inline std::array<std::vector<complexd>, 3> to_physical(const SpectralField& u) {
    const auto& tf = SpectralTransform::for_grid(u.grid);
    std::array<std::vector<complexd>, 3> phys;
    for (int c = 0; c < 3; ++c) tf.to_physical(u.coeffs[c], phys[c]);
    return phys;
}

/// max pointwise speed |u(x)|, used by the CFL bound
inline double max_physical_speed(const SpectralField& u) {
    const auto phys = to_physical(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < phys[0].size(); ++i) {
        double s2 = 0.0;
        for (int c = 0; c < 3; ++c) s2 += phys[c][i].real() * phys[c][i].real();
        worst = std::max(worst, s2);
    }
    return std::sqrt(worst);
}

/// Trilinear inertia form b(u,v,w) = sum_ij int u_i d_i v_j w_j dx, evaluated by
/// collocation products and exact quadrature. For fields supported on the
/// two-thirds mask the triple products are alias-free, so the identities
/// b(u,u,u) = 0 and b(u,v,w) = -b(u,w,v) hold to roundoff for solenoidal u.
inline double trilinear_b(const SpectralField& u, const SpectralField& v,
                          const SpectralField& w) {
    check_same_grid(u, v);
    check_same_grid(u, w);
    const auto& tf = SpectralTransform::for_grid(u.grid);
    const auto up = to_physical(u);
    const auto wp = to_physical(w);
    std::vector<complexd> dv;
    double acc = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            tf.to_physical(derivative_coeffs(v, j, i), dv);
            double s = 0.0;
            for (std::size_t x = 0; x < dv.size(); ++x)
                s += up[i][x].real() * dv[x].real() * wp[j][x].real();
            acc += s;
        }
    return acc * u.grid.cell_volume();
}

/// Leray-projected, dealiased advection term B(u,u) = P[(u.grad)u], satisfying
/// (B(u,u), w) = b(u,u,w) for every dealiased test field w.
inline SpectralField nonlinear_term(const SpectralField& u) {
    const WaveGrid& g = u.grid;
    const auto& tf = SpectralTransform::for_grid(g);
    const auto up = to_physical(u);
    std::vector<complexd> dv;
    SpectralField out(g);
    std::vector<complexd> prod(g.size());
    for (int j = 0; j < 3; ++j) {
        for (auto& z : prod) z = 0.0;
        for (int i = 0; i < 3; ++i) {
            tf.to_physical(derivative_coeffs(u, j, i), dv);
            for (std::size_t x = 0; x < dv.size(); ++x)
                prod[x] += complexd{up[i][x].real() * dv[x].real(), 0.0};
        }
        tf.to_spectral(prod, out.coeffs[j]);
    }
    dealias(out);
    return leray_project(out);
}

}  // namespace hvns
