#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvns/spectral_field.hpp"
#include "hvns/spectral_ops.hpp"

namespace hvns {

/// Static force field plus an optional static perturbation, f_eff = f + delta*g.
struct Forcing {
    std::optional<SpectralField> base;
    std::optional<SpectralField> perturbation;
    double delta = 0.0;

    SpectralField effective(const WaveGrid& g) const {
        SpectralField f = base ? *base : zero_field(g);
        if (!(f.grid == g)) throw std::invalid_argument("forcing grid mismatch");
        if (perturbation && delta != 0.0) {
            check_same_grid(f, *perturbation);
            f += delta * (*perturbation);
        }
        return f;
    }
};

struct PhysicsParams {
    double nu = 1.0;        // kinematic viscosity, > 0
    double eps = 0.0;       // artificial dissipation, >= 0; 0 recovers the conventional system
    double l = 2.0;         // hyperviscosity exponent, >= 1
    Forcing forcing;

    void validate() const {
        if (!(nu > 0.0)) throw std::invalid_argument("PhysicsParams: nu must be positive");
        if (!(eps >= 0.0)) throw std::invalid_argument("PhysicsParams: eps must be nonnegative");
        if (!(l >= 1.0)) throw std::invalid_argument("PhysicsParams: l must be >= 1");
    }
};

/// Time-stamped scalar series (every step) plus thinned full-field snapshots.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> energy;         // ||u||^2
    std::vector<double> enstrophy;      // ||u||_1^2
    std::vector<double> hyper;          // ||A^{l/2} u||^2
    std::vector<double> hyper1;         // ||A^{(l+1)/2} u||^2
    std::vector<double> forcing_power;  // (f, u)
    std::vector<double> dual_dt;        // ||du/dt||_{D(A^l)'}
    std::vector<double> snapshot_times;
    std::vector<SpectralField> snapshots;
    double dt = 0.0;
    PhysicsParams params;

    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    const SpectralField& final_state() const { return snapshots.back(); }
};

struct CflViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowupError : std::runtime_error {
    BlowupError(double time, double value)
        : std::runtime_error("blow-up guard tripped at t=" + std::to_string(time) +
                             ", ||u||^2=" + std::to_string(value)),
          t(time),
          energy(value) {}
    double t;
    double energy;
};

namespace detail {

/// per-mode linear symbol nu|k|^2 + eps|k|^{2l}
inline std::vector<double> linear_symbol(const WaveGrid& g, double nu, double eps, double l) {
    const int n = g.modes_per_dim;
    std::vector<double> lam(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double k2 = g.k_squared(i, j, k);
                lam[g.flat(i, j, k)] = k2 == 0.0 ? 0.0 : nu * k2 + eps * std::pow(k2, l);
            }
    return lam;
}

/// conventional-system symbol nu|k|^2 (no hyperviscosity term)
inline std::vector<double> linear_symbol_conventional(const WaveGrid& g, double nu) {
    const int n = g.modes_per_dim;
    std::vector<double> lam(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) lam[g.flat(i, j, k)] = nu * g.k_squared(i, j, k);
    return lam;
}

struct StepWeights {
    std::vector<double> decay;  // exp(-lambda dt)
    std::vector<double> duh;    // (1 - exp(-lambda dt))/lambda, Duhamel weight for static f
};

inline StepWeights step_weights(const std::vector<double>& lam, double dt) {
    StepWeights w;
    w.decay.resize(lam.size());
    w.duh.resize(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        w.decay[i] = std::exp(-lam[i] * dt);
        w.duh[i] = lam[i] == 0.0 ? dt : -std::expm1(-lam[i] * dt) / lam[i];
    }
    return w;
}

inline void check_cfl(const SpectralField& u, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double speed = max_physical_speed(u);
    const double cfl = dt * speed * u.grid.k_max();
    if (cfl > 0.5)
        throw CflViolation("CFL violation: dt*max|u|*k_max = " + std::to_string(cfl) +
                           " > 0.5; step refused");
}

/// One integrating-factor Heun step. The linear flow exp(-lambda dt) and the
/// static-forcing Duhamel integral are applied exactly; the advection term is
/// advanced explicitly at second order. nl_u = B(u,u) at the step start.
inline SpectralField step_core(const SpectralField& u, const SpectralField& f,
                               const SpectralField& nl_u, const StepWeights& w, double dt) {
    const WaveGrid& g = u.grid;
    SpectralField pred(g);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            pred.coeffs[c][i] = w.decay[i] * (u.coeffs[c][i] - dt * nl_u.coeffs[c][i]) +
                                w.duh[i] * f.coeffs[c][i];
    const SpectralField nl_pred = nonlinear_term(pred);
    SpectralField out(g);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            out.coeffs[c][i] = w.decay[i] * u.coeffs[c][i] + w.duh[i] * f.coeffs[c][i] -
                               0.5 * dt *
                                   (w.decay[i] * nl_u.coeffs[c][i] + nl_pred.coeffs[c][i]);
    return out;
}

/// scalar diagnostics recorded at every step
struct SeriesWeights {
    std::vector<double> k2, wl, wl1, wdual;
};

inline SeriesWeights series_weights(const WaveGrid& g, double l) {
    const int n = g.modes_per_dim;
    SeriesWeights s;
    s.k2.resize(g.size());
    s.wl.resize(g.size());
    s.wl1.resize(g.size());
    s.wdual.resize(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t id = g.flat(i, j, k);
                const double k2 = g.k_squared(i, j, k);
                s.k2[id] = k2;
                s.wl[id] = k2 == 0.0 ? 0.0 : std::pow(k2, l);
                s.wl1[id] = k2 == 0.0 ? 0.0 : std::pow(k2, l + 1.0);
                s.wdual[id] = k2 == 0.0 ? 0.0 : std::pow(k2, -2.0 * l);
            }
    return s;
}

inline void record_series(Trajectory& traj, const SpectralField& u, const SpectralField& f,
                          const SpectralField& nl_u, const std::vector<double>& lam,
                          const SeriesWeights& sw, double t) {
    const WaveGrid& g = u.grid;
    const double vol = g.volume();
    double e = 0, ens = 0, hy = 0, hy1 = 0, fp = 0, dual = 0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            const complexd& z = u.coeffs[c][i];
            const double m2 = std::norm(z);
            e += m2;
            ens += sw.k2[i] * m2;
            hy += sw.wl[i] * m2;
            hy1 += sw.wl1[i] * m2;
            const complexd& fz = f.coeffs[c][i];
            fp += fz.real() * z.real() + fz.imag() * z.imag();
            // du/dt = f - lambda u - B(u,u), per mode
            const complexd r = fz - lam[i] * z - nl_u.coeffs[c][i];
            dual += sw.wdual[i] * std::norm(r);
        }
    traj.times.push_back(t);
    traj.energy.push_back(vol * e);
    traj.enstrophy.push_back(vol * ens);
    traj.hyper.push_back(vol * hy);
    traj.hyper1.push_back(vol * hy1);
    traj.forcing_power.push_back(vol * fp);
    traj.dual_dt.push_back(std::sqrt(vol * dual));
}

inline Trajectory integrate_with_symbol(const SpectralField& u0, const PhysicsParams& p,
                                        const std::vector<double>& lam, double T, double dt,
                                        int snapshot_stride) {
    if (!(T > 0.0)) throw std::invalid_argument("integrate: T must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (snapshot_stride < 1) throw std::invalid_argument("integrate: snapshot_stride must be >= 1");
    const WaveGrid& g = u0.grid;
    const SpectralField f = p.forcing.effective(g);
    const long nsteps = std::lround(T / dt);
    if (nsteps < 1) throw std::invalid_argument("integrate: T shorter than one step");

    const StepWeights w = step_weights(lam, dt);
    const SeriesWeights sw = series_weights(g, p.l);
    const double fnorm = sobolev_norm(f, 0.0);
    const double rho0_sq = std::pow(fnorm / (p.nu * g.lambda1), 2.0);
    const double e0 = inner_product(u0, u0);

    Trajectory traj;
    traj.dt = dt;
    traj.params = p;
    SpectralField u = u0;
    dealias(u);
    for (long s = 0; s <= nsteps; ++s) {
        const double t = s * dt;
        const SpectralField nl = nonlinear_term(u);
        record_series(traj, u, f, nl, lam, sw, t);
        const double e = traj.energy.back();
        if (!std::isfinite(e) ||
            e > 1e6 * (e0 * std::exp(-p.nu * g.lambda1 * t) + rho0_sq) + 1e6 * dt * fnorm)
            throw BlowupError(t, e);
        if (s % snapshot_stride == 0 || s == nsteps) {
            traj.snapshot_times.push_back(t);
            traj.snapshots.push_back(u);
        }
        if (s == nsteps) break;
        check_cfl(u, dt);
        u = step_core(u, f, nl, w, dt);
    }
    return traj;
}

}  // namespace detail

/// right-hand side f - eps A^l u - nu A u - B(u,u) of the regularized system
inline SpectralField rhs(const SpectralField& u, const PhysicsParams& p) {
    p.validate();
    const WaveGrid& g = u.grid;
    const auto lam = detail::linear_symbol(g, p.nu, p.eps, p.l);
    SpectralField out = p.forcing.effective(g);
    const SpectralField nl = nonlinear_term(u);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            out.coeffs[c][i] -= lam[i] * u.coeffs[c][i] + nl.coeffs[c][i];
    return out;
}

/// conventional (eps = 0) right-hand side f - nu A u - B(u,u)
inline SpectralField conventional_rhs(const SpectralField& u, const PhysicsParams& p) {
    p.validate();
    const WaveGrid& g = u.grid;
    const auto lam = detail::linear_symbol_conventional(g, p.nu);
    SpectralField out = p.forcing.effective(g);
    const SpectralField nl = nonlinear_term(u);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            out.coeffs[c][i] -= lam[i] * u.coeffs[c][i] + nl.coeffs[c][i];
    return out;
}

/// single integrating-factor Runge-Kutta step of the regularized system
inline SpectralField step(const SpectralField& u, const PhysicsParams& p, double dt) {
    p.validate();
    detail::check_cfl(u, dt);
    const auto lam = detail::linear_symbol(u.grid, p.nu, p.eps, p.l);
    const auto w = detail::step_weights(lam, dt);
    return detail::step_core(u, p.forcing.effective(u.grid), nonlinear_term(u), w, dt);
}

/// integrate the regularized system over [0, T]
inline Trajectory integrate(const SpectralField& u0, const PhysicsParams& p, double T, double dt,
                            int snapshot_stride) {
    p.validate();
    const auto lam = detail::linear_symbol(u0.grid, p.nu, p.eps, p.l);
    return detail::integrate_with_symbol(u0, p, lam, T, dt, snapshot_stride);
}

/// integrate the conventional system; at eps = 0 the regularized path must
/// reproduce this trajectory bitwise
inline Trajectory integrate_conventional(const SpectralField& u0, const PhysicsParams& p, double T,
                                         double dt, int snapshot_stride) {
    p.validate();
    const auto lam = detail::linear_symbol_conventional(u0.grid, p.nu);
    return detail::integrate_with_symbol(u0, p, lam, T, dt, snapshot_stride);
}

struct SteadyStateResult {
    SpectralField state;
    double residual = 0.0;
    bool converged = false;
    double elapsed = 0.0;
};

/// March toward a fixed point of the semiflow; converged when ||rhs(u)|| <= tol.
inline SteadyStateResult steady_state(const PhysicsParams& p, const SpectralField& u_init,
                                      double tol, double t_max) {
    p.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("steady_state: tol must be positive");
    const WaveGrid& g = u_init.grid;
    const SpectralField f = p.forcing.effective(g);
    const auto lam = detail::linear_symbol(g, p.nu, p.eps, p.l);

    SpectralField u = u_init;
    dealias(u);
    double t = 0.0;
    SteadyStateResult res;
    while (true) {
        SpectralField nl = nonlinear_term(u);
        SpectralField r = f;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < g.size(); ++i)
                r.coeffs[c][i] -= lam[i] * u.coeffs[c][i] + nl.coeffs[c][i];
        res.residual = sobolev_norm(r, 0.0);
        res.elapsed = t;
        if (res.residual <= tol) {
            res.converged = true;
            break;
        }
        if (t >= t_max) break;
        const double speed = max_physical_speed(u);
        double dt = 0.1 / (p.nu * g.lambda1);
        if (speed > 0.0) dt = std::min(dt, 0.4 / (speed * g.k_max()));
        dt = std::min(dt, t_max - t + 1e-12);
        const auto w = detail::step_weights(lam, dt);
        u = detail::step_core(u, f, nl, w, dt);
        t += dt;
        const double e = inner_product(u, u);
        if (!std::isfinite(e)) throw BlowupError(t, e);
    }
    res.state = u;
    return res;
}

}  // namespace hvns
