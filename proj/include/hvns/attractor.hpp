#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hvns/dynamics.hpp"
#include "hvns/estimates.hpp"

namespace hvns {

/// Metric selector: Sobolev index s picks the state norm (0 -> V0, 1 -> V1,
/// -2l -> D(A^l)'); p and n_max parameterize the trajectory-space metric.
struct MetricSpec {
    double norm_index = 0.0;
    double p = 2.0;
    int n_max = 16;

    void validate() const {
        if (!(p >= 1.0)) throw std::invalid_argument("MetricSpec: p must be >= 1");
        if (n_max < 1) throw std::invalid_argument("MetricSpec: n_max must be >= 1");
    }
};

/// Finite post-transient snapshot set serving as an attractor proxy.
struct TrajectorySet {
    std::vector<SpectralField> points;
    double eps = 0.0;
    double transient = 0.0;
    double sample_gap = 0.0;
    std::vector<bool> in_absorbing_ball;  // per point: inside B_delta0 and B_delta1

    bool all_absorbed() const {
        for (bool b : in_absorbing_ball)
            if (!b) return false;
        return true;
    }
};

/// dist(X, Y) = sup_{x in X} inf_{y in Y} ||x - y||_s; asymmetric.
inline double hausdorff_semidistance(const TrajectorySet& X, const TrajectorySet& Y,
                                     const MetricSpec& m = {}) {
    m.validate();
    if (X.points.empty() || Y.points.empty())
        throw std::invalid_argument("hausdorff_semidistance: empty set");
    double sup = 0.0;
    for (const auto& x : X.points) {
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& y : Y.points)
            inf = std::min(inf, sobolev_norm(x - y, m.norm_index));
        sup = std::max(sup, inf);
    }
    return sup;
}

/// Translation-invariant trajectory-space metric
/// d(a, b) = sum_{n=1}^{n_max} 2^{-n} min(||a - b||_{L^p(0,n;X)}, 1),
/// evaluated on the shared snapshot grid; windows are clamped to the horizon.
inline double frechet_metric(const Trajectory& a, const Trajectory& b, const MetricSpec& m = {}) {
    m.validate();
    if (a.snapshot_times.size() != b.snapshot_times.size())
        throw std::invalid_argument("frechet_metric: mismatched sampling");
    for (std::size_t i = 0; i < a.snapshot_times.size(); ++i)
        if (a.snapshot_times[i] != b.snapshot_times[i])
            throw std::invalid_argument("frechet_metric: mismatched sampling");
    if (a.snapshots.empty()) throw std::invalid_argument("frechet_metric: empty trajectory");

    const std::size_t ns = a.snapshots.size();
    std::vector<double> diff_p(ns);
    for (std::size_t i = 0; i < ns; ++i)
        diff_p[i] = std::pow(sobolev_norm(a.snapshots[i] - b.snapshots[i], m.norm_index), m.p);

    double metric = 0.0;
    double weight = 1.0;
    for (int n = 1; n <= m.n_max; ++n) {
        weight *= 0.5;
        // trapezoid of ||diff||^p over [0, min(n, T)]
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < ns; ++i) {
            const double t0 = a.snapshot_times[i], t1 = a.snapshot_times[i + 1];
            if (t0 >= n) break;
            const double hi = std::min<double>(t1, n);
            acc += 0.5 * (diff_p[i] + diff_p[i + 1]) * (hi - t0);
        }
        metric += weight * std::min(std::pow(acc, 1.0 / m.p), 1.0);
    }
    return metric;
}

namespace detail {

inline int sweep_threads() {
    if (const char* env = std::getenv("HVNS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// run fn(0..njobs-1), at most HVNS_THREADS jobs in flight
inline void parallel_jobs(int njobs, const std::function<void(int)>& fn) {
    const int nthreads = std::min(njobs, sweep_threads());
    if (nthreads <= 1) {
        for (int i = 0; i < njobs; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < njobs; i += nthreads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

struct ConvergenceRow {
    double eps = 0.0;
    double error = 0.0;  // L^2(0,T;V0) distance to the eps=0 run
    bool ok = true;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;  // log-log fit over rows with eps > 0
};

/// Strong-convergence sweep: error(eps) = ||u^eps - u^0||_{L^2(0,T;V0)}.
inline ConvergenceTable convergence_sweep(const SpectralField& u0, const PhysicsParams& p_base,
                                          const std::vector<double>& eps_list, double T, double dt,
                                          int sample_stride = 1) {
    if (eps_list.empty()) throw std::invalid_argument("convergence_sweep: empty eps list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("convergence_sweep: eps list must be strictly decreasing");

    PhysicsParams p0 = p_base;
    p0.eps = 0.0;
    const Trajectory base = integrate(u0, p0, T, dt, sample_stride);

    ConvergenceTable table;
    table.rows.resize(eps_list.size());
    detail::parallel_jobs(static_cast<int>(eps_list.size()), [&](int i) {
        ConvergenceRow& row = table.rows[i];
        row.eps = eps_list[i];
        if (row.eps == 0.0) {
            row.error = 0.0;
            return;
        }
        PhysicsParams p = p_base;
        p.eps = row.eps;
        try {
            const Trajectory traj = integrate(u0, p, T, dt, sample_stride);
            std::vector<double> d2(base.snapshots.size());
            for (std::size_t s = 0; s < base.snapshots.size(); ++s)
                d2[s] = std::pow(sobolev_norm(traj.snapshots[s] - base.snapshots[s], 0.0), 2.0);
            double acc = 0.0;
            for (std::size_t s = 0; s + 1 < d2.size(); ++s)
                acc += 0.5 * (d2[s] + d2[s + 1]) *
                       (base.snapshot_times[s + 1] - base.snapshot_times[s]);
            row.error = std::sqrt(acc);
        } catch (const BlowupError&) {
            row.ok = false;
        }
    });

    // least-squares slope of log(error) vs log(eps), excluding flagged rows
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& row : table.rows) {
        if (!row.ok || row.eps <= 0.0 || row.error <= 0.0) continue;
        const double x = std::log(row.eps), y = std::log(row.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) table.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return table;
}

struct ContinuityReport {
    double c1_star = 0.0;   // smallest C with ||w(t)||^2 <= C (||w(0)||^2 + (2T/nu)||g||^2)
    double sup_w = 0.0;     // sup_t ||w(t)||
    double w0 = 0.0;        // ||w(0)||
    double g_norm = 0.0;    // ||f_a - f_b||
    bool bound_holds = false;
};

/// Gronwall-type difference bound between two runs sharing nu and l:
/// w = u_a - u_b, g = f_a - f_b.
inline ContinuityReport continuity_gronwall_check(const PhysicsParams& pa,
                                                  const SpectralField& u0a,
                                                  const PhysicsParams& pb,
                                                  const SpectralField& u0b, double T, double dt,
                                                  int sample_stride = 1) {
    if (pa.nu != pb.nu || pa.l != pb.l)
        throw std::invalid_argument("continuity_gronwall_check: runs must share nu and l");
    check_same_grid(u0a, u0b);
    const Trajectory ta = integrate(u0a, pa, T, dt, sample_stride);
    const Trajectory tb = integrate(u0b, pb, T, dt, sample_stride);

    ContinuityReport rep;
    const WaveGrid& g = u0a.grid;
    rep.g_norm =
        sobolev_norm(pa.forcing.effective(g) - pb.forcing.effective(g), 0.0);
    rep.w0 = sobolev_norm(ta.snapshots.front() - tb.snapshots.front(), 0.0);
    const double denom = rep.w0 * rep.w0 + (2.0 * T / pa.nu) * rep.g_norm * rep.g_norm;
    double worst_ratio = 0.0;
    for (std::size_t s = 0; s < ta.snapshots.size(); ++s) {
        const double w = sobolev_norm(ta.snapshots[s] - tb.snapshots[s], 0.0);
        rep.sup_w = std::max(rep.sup_w, w);
        if (denom > 0.0) worst_ratio = std::max(worst_ratio, w * w / denom);
    }
    rep.c1_star = denom > 0.0 ? std::max(worst_ratio, 1.0)
                              : (rep.sup_w == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    rep.bound_holds = std::isfinite(rep.c1_star);
    return rep;
}

struct OmegaLimitSettings {
    double t1 = 10.0;      // transient discard time
    int n_samples = 8;
    double gap = 0.5;      // spacing between kept snapshots
    double dt = 0.01;
    double delta0 = 0.0;   // V0 absorbing radius; 0 -> 1.1*rho0 (with floor)
    double delta1 = 0.0;   // V1 absorbing radius; 0 -> skip the V1 check
};

/// Integrate through the transient, then collect evenly spaced snapshots as a
/// finite omega-limit sample; each sample is checked against the absorbing
/// balls B_delta0 (V0) and, when delta1 is given, B_delta1 (V1).
inline TrajectorySet omega_limit_sample(const PhysicsParams& p, const SpectralField& u0,
                                        const OmegaLimitSettings& s) {
    if (s.n_samples < 1) throw std::invalid_argument("omega_limit_sample: need n_samples >= 1");
    if (!(s.gap > 0.0) || !(s.t1 > 0.0))
        throw std::invalid_argument("omega_limit_sample: t1 and gap must be positive");
    const WaveGrid& g = u0.grid;
    const double fnorm = sobolev_norm(p.forcing.effective(g), 0.0);
    const double rho0 = fnorm / (p.nu * g.lambda1);
    double delta0 = s.delta0;
    if (delta0 == 0.0) delta0 = detail::default_delta0(rho0, sobolev_norm(u0, 0.0));

    TrajectorySet set;
    set.eps = p.eps;
    set.transient = s.t1;
    set.sample_gap = s.gap;

    const int big = 1 << 30;  // transient fields are not kept
    Trajectory transient = integrate(u0, p, s.t1, s.dt, big);
    SpectralField u = transient.final_state();
    for (int i = 0; i < s.n_samples; ++i) {
        if (i > 0) {
            Trajectory leg = integrate(u, p, s.gap, s.dt, big);
            u = leg.final_state();
        }
        const bool in_v0 = sobolev_norm(u, 0.0) <= delta0;
        const bool in_v1 = s.delta1 == 0.0 || sobolev_norm(u, 1.0) <= s.delta1;
        set.points.push_back(u);
        set.in_absorbing_ball.push_back(in_v0 && in_v1);
    }
    return set;
}

struct SemicontinuityRow {
    double eps = 0.0;
    double dist = 0.0;  // Hausdorff semidistance of the proxy to the eps=0 proxy
};

struct SemicontinuityTable {
    std::vector<SemicontinuityRow> rows;
    bool monotone_ok = true;  // halving eps must not grow dist by more than 10%
};

/// Upper-semicontinuity experiment: identical omega-limit sampling protocol
/// for every eps, V0 Hausdorff semidistance against the eps=0 baseline proxy.
inline SemicontinuityTable semicontinuity_experiment(const PhysicsParams& p_base,
                                                     const SpectralField& u0,
                                                     const std::vector<double>& eps_list,
                                                     const OmegaLimitSettings& s) {
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("semicontinuity_experiment: eps list must decrease");
    PhysicsParams p0 = p_base;
    p0.eps = 0.0;
    const TrajectorySet baseline = omega_limit_sample(p0, u0, s);

    SemicontinuityTable table;
    table.rows.resize(eps_list.size());
    detail::parallel_jobs(static_cast<int>(eps_list.size()), [&](int i) {
        PhysicsParams p = p_base;
        p.eps = eps_list[i];
        table.rows[i].eps = eps_list[i];
        if (eps_list[i] == 0.0) {
            table.rows[i].dist = 0.0;
            return;
        }
        const TrajectorySet proxy = omega_limit_sample(p, u0, s);
        table.rows[i].dist = hausdorff_semidistance(proxy, baseline, MetricSpec{0.0});
    });
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].dist > 1.1 * table.rows[i - 1].dist) table.monotone_ok = false;
    return table;
}

struct PerturbedRow {
    double eps = 0.0;
    double delta = 0.0;
    double force_gap = 0.0;         // ||f^eps - f|| = delta * ||g||
    double dist_vs_unperturbed = 0.0;  // proxy (eps, f^eps) vs (eps, f)
    double dist_vs_base = 0.0;         // proxy (eps, f^eps) vs (0, f)
};

struct PerturbedReport {
    std::vector<PerturbedRow> rows;
    bool both_trend_to_zero = true;
    double slope_vs_unperturbed = 0.0;  // log-log slope of dist_vs_unperturbed against eps
};

/// Perturbed-forcing robustness: f^eps = f + delta(eps) * g with delta -> 0.
inline PerturbedReport perturbed_forcing_experiment(const PhysicsParams& p_base,
                                                    const SpectralField& u0,
                                                    const SpectralField& g,
                                                    const std::vector<double>& eps_list,
                                                    const std::vector<double>& delta_of_eps,
                                                    const OmegaLimitSettings& s) {
    if (eps_list.size() != delta_of_eps.size())
        throw std::invalid_argument("perturbed_forcing_experiment: eps/delta size mismatch");
    for (std::size_t i = 1; i < eps_list.size(); ++i) {
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("perturbed_forcing_experiment: eps list must decrease");
        if (!(delta_of_eps[i] < delta_of_eps[i - 1]) && delta_of_eps[i] != 0.0)
            throw std::invalid_argument(
                "perturbed_forcing_experiment: delta(eps) must vanish as eps -> 0");
    }

    PhysicsParams p0 = p_base;
    p0.eps = 0.0;
    const TrajectorySet base0 = omega_limit_sample(p0, u0, s);
    const double gnorm = sobolev_norm(g, 0.0);

    PerturbedReport rep;
    rep.rows.resize(eps_list.size());
    detail::parallel_jobs(static_cast<int>(eps_list.size()), [&](int i) {
        PerturbedRow& row = rep.rows[i];
        row.eps = eps_list[i];
        row.delta = delta_of_eps[i];
        row.force_gap = row.delta * gnorm;

        PhysicsParams plain = p_base;
        plain.eps = row.eps;
        PhysicsParams pert = plain;
        pert.forcing.perturbation = g;
        pert.forcing.delta = row.delta;

        const TrajectorySet unperturbed = omega_limit_sample(plain, u0, s);
        const TrajectorySet perturbed = omega_limit_sample(pert, u0, s);
        row.dist_vs_unperturbed =
            hausdorff_semidistance(perturbed, unperturbed, MetricSpec{0.0});
        row.dist_vs_base = hausdorff_semidistance(perturbed, base0, MetricSpec{0.0});
    });

    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].dist_vs_unperturbed > 1.1 * rep.rows[i - 1].dist_vs_unperturbed ||
            rep.rows[i].dist_vs_base > 1.1 * rep.rows[i - 1].dist_vs_base)
            rep.both_trend_to_zero = false;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& row : rep.rows) {
        if (!(row.eps > 0.0) || !(row.dist_vs_unperturbed > 0.0)) continue;
        const double x = std::log(row.eps), y = std::log(row.dist_vs_unperturbed);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) rep.slope_vs_unperturbed = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return rep;
}

}  // namespace hvns
