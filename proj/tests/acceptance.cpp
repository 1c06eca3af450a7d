// Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hvns/attractor.hpp"
#include "hvns/dynamics.hpp"
#include "hvns/estimates.hpp"
#include "hvns/flows.hpp"
#include "hvns/snapshot_io.hpp"

using namespace hvns;

namespace {
const double kTwoPi = 2.0 * M_PI;
int g_failures = 0;

void report(int criterion, const char* name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double shear_amp_for_norm(const WaveGrid& g, double norm) {
    return norm * std::sqrt(2.0 / g.volume());
}

// ---------------------------------------------------------------- criterion 1
void criterion_trilinear() {
    const WaveGrid g = make_grid(16, kTwoPi);
    bool ok = true;
    double worst = 0.0;
    std::vector<SpectralField> fields;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        fields.push_back(random_solenoidal_field(g, 2.0, 1.0, seed));
    for (const auto& u : fields) {
        const double bound = 1e-10 * sobolev_norm(u, 0.0) * std::pow(sobolev_norm(u, 1.0), 2.0);
        const double val = std::abs(trilinear_b(u, u, u));
        worst = std::max(worst, val / bound);
        if (val > bound) ok = false;
    }
    for (std::size_t i = 0; i + 2 < fields.size(); i += 3) {
        const SpectralField &u = fields[i], &v = fields[i + 1], &w = fields[i + 2];
        const double scale =
            2.0 * sobolev_norm(u, 0.0) * sobolev_norm(v, 1.0) * sobolev_norm(w, 1.0);
        const double anti = std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v));
        worst = std::max(worst, anti / (1e-10 * scale));
        if (anti > 1e-10 * scale) ok = false;
    }
    report(1, "trilinear identities over 100 random fields", ok,
           "worst/bound = " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 2
void criterion_poincare() {
    const WaveGrid g = make_grid(8, kTwoPi);
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const SpectralField u = random_solenoidal_field(g, 1.5, 1.0, seed);
        const double lhs = g.lambda1 * std::pow(sobolev_norm(u, 0.0), 2.0);
        const double rhs = std::pow(sobolev_norm(u, 1.0), 2.0);
        if (lhs > rhs * (1.0 + 1e-12)) ok = false;
    }
    // equality on the |k| = 1 shell
    SpectralField shell(g);
    add_mode(shell, {1, 0, 0}, {0.0, complexd{0.3, -0.2}, complexd{0.1, 0.4}});
    add_mode(shell, {0, 0, 1}, {complexd{-0.5, 0.2}, complexd{0.6, 0.0}, 0.0});
    const double lhs = g.lambda1 * std::pow(sobolev_norm(shell, 0.0), 2.0);
    const double rhs = std::pow(sobolev_norm(shell, 1.0), 2.0);
    const bool eq = std::abs(lhs - rhs) <= 1e-12 * rhs;
    report(2, "poincare inequality, 1000 fields + shell equality", ok && eq);
}

// ---------------------------------------------------------------- criterion 3
void criterion_shear_oracle() {
    bool ok = true;
    std::string detail;

    struct Combo {
        double nu, eps, l;
    };
    const WaveGrid g = make_grid(4, kTwoPi);
    for (const Combo c : {Combo{1.0, 0.5, 2.0}, Combo{0.3, 0.2, 3.0}}) {
        PhysicsParams p;
        p.nu = c.nu;
        p.eps = c.eps;
        p.l = c.l;
        const double lambda = c.nu + c.eps;  // |k|^2 = 1 shell
        const double A = 1.0, dt = 4e-5, T = 1.2;
        const SpectralField u0 = shear_field(g, A);
        const double e0 = std::pow(sobolev_norm(u0, 0.0), 2.0);
        const Trajectory traj = integrate(u0, p, T, dt, 1 << 30);

        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); i += 100) {
            const double expect = e0 * std::exp(-2.0 * lambda * traj.times[i]);
            worst = std::max(worst, std::abs(traj.energy[i] - expect) / expect);
        }
        if (worst > 1e-10) ok = false;

        // dual-derivative sup over unit windows, closed form at the t = 0 window
        EstimateReport scalars;
        verify_dual_derivative(traj, &scalars);
        const double dual_closed =
            lambda * lambda * e0 * (1.0 - std::exp(-2.0 * lambda)) / (2.0 * lambda);
        const double dual_err = std::abs(scalars.c2_empirical - dual_closed) / dual_closed;
        if (dual_err > 1e-8) ok = false;

        // S_b closed form: sqrt(window enstrophy) + sup norm + sqrt(window dual)
        const double win = e0 * (1.0 - std::exp(-2.0 * lambda)) / (2.0 * lambda);
        const double sb_closed = std::sqrt(win) + std::sqrt(e0) + std::sqrt(dual_closed);
        const double sb_err = std::abs(sb_norm(traj) - sb_closed) / sb_closed;
        if (sb_err > 1e-8) ok = false;
        detail += "traj=" + fmt(worst) + " dual=" + fmt(dual_err) + " sb=" + fmt(sb_err) + " ";
    }

    // wide box: k^2 = 1/4 on the shear shell, decay rate nu k^2 + eps k^{2l}
    {
        const WaveGrid gw = make_grid(4, 2.0 * kTwoPi);
        PhysicsParams p;
        p.nu = 1.0;
        p.eps = 0.5;
        p.l = 2.0;
        const double k2 = 0.25;
        const double lambda = p.nu * k2 + p.eps * std::pow(k2, p.l);
        const SpectralField u0 = shear_field(gw, 1.0);
        const double e0 = std::pow(sobolev_norm(u0, 0.0), 2.0);
        const Trajectory traj = integrate(u0, p, 2.0, 1e-3, 1 << 30);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double expect = e0 * std::exp(-2.0 * lambda * traj.times[i]);
            worst = std::max(worst, std::abs(traj.energy[i] - expect) / expect);
        }
        if (worst > 1e-10) ok = false;
        detail += "widebox=" + fmt(worst);
    }
    report(3, "closed-form shear oracle", ok, detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_energy_law_order() {
    const WaveGrid g = make_grid(16, kTwoPi);
    PhysicsParams p;
    p.nu = 0.1;
    p.eps = 0.01;
    p.l = 2.0;
    const SpectralField u0 = taylor_green_field(g, 1.0);
    std::vector<double> residuals;
    for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
        const Trajectory traj = integrate(u0, p, 1.0, dt, 1 << 30);
        residuals.push_back(verify_energy_balance(traj).lhs);
    }
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
        const double ratio = residuals[i] / residuals[i + 1];
        detail += fmt(ratio) + " ";
        if (ratio < 3.2 || ratio > 4.8) ok = false;
    }
    report(4, "energy-balance residual halves at second order", ok, "ratios " + detail);
}

// ------------------------------------------------------- criteria 5 and 6
std::vector<Trajectory> damped_random_runs() {
    const WaveGrid g = make_grid(16, kTwoPi);
    PhysicsParams p;
    p.nu = 1.0;
    p.eps = 0.05;
    p.l = 2.0;
    p.forcing.base = shear_field(g, shear_amp_for_norm(g, 0.3));  // rho0 = 0.3
    std::vector<Trajectory> runs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SpectralField u0 = random_solenoidal_field(g, 2.5, 1.0, seed);
        u0 *= 1.0 / sobolev_norm(u0, 0.0);  // ||u0|| = 1
        runs.push_back(integrate(u0, p, 8.0, 4e-3, 1 << 30));
    }
    return runs;
}

void criterion_decay_absorption(const std::vector<Trajectory>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& traj : runs) {
        EstimateReport scalars;
        const auto entries = verify_decay_absorption(traj, &scalars);
        for (const auto& e : entries)
            if (!e.pass) {
                ok = false;
                detail += e.name + std::string(" margin=") + fmt(e.margin) + " ";
            }
    }
    report(5, "decay envelope, entry time, limsup radius on 10 random fields", ok, detail);
}

void criterion_window_bounds(const std::vector<Trajectory>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& traj : runs)
        for (const auto& e : verify_window_bounds(traj, 1.0))
            if (!e.pass) {
                ok = false;
                detail += e.name + std::string(" margin=") + fmt(e.margin) + " ";
            }
    report(6, "unit-window enstrophy and energy budgets", ok, detail);
}

// ---------------------------------------------------------------- criterion 7
void criterion_convergence() {
    const auto t_start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    const std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};

    {  // shear sweep against the closed form
        const WaveGrid g = make_grid(4, kTwoPi);
        PhysicsParams p;
        p.nu = 1.0;
        p.l = 2.0;
        const double T = 2.0, dt = 1e-3;
        const SpectralField u0 = shear_field(g, 1.0);
        const double u0n = sobolev_norm(u0, 0.0);
        const ConvergenceTable table = convergence_sweep(u0, p, eps_list, T, dt, 1);
        double worst = 0.0;
        for (std::size_t r = 0; r < eps_list.size(); ++r) {
            const double eps = eps_list[r];
            double acc = 0.0;
            const int steps = 64000;
            const double h = T / steps;  // fine quadrature of the continuum closed form
            for (int i = 0; i < steps; ++i) {
                auto gap2 = [&](double t) {
                    const double d = std::exp(-(1.0 + eps) * t) - std::exp(-t);
                    return d * d;
                };
                acc += 0.5 * h * (gap2(i * h) + gap2((i + 1) * h));
            }
            const double closed = u0n * std::sqrt(acc);
            worst = std::max(worst, std::abs(table.rows[r].error - closed) / closed);
        }
        if (worst > 0.01) ok = false;
        detail += "shear_err=" + fmt(worst) + " ";
    }

    {  // general taylor-green sweep: strictly decreasing, slope >= 0.8
        const WaveGrid g = make_grid(16, kTwoPi);
        PhysicsParams p;
        p.nu = 0.5;
        p.l = 2.0;
        const SpectralField u0 = taylor_green_field(g, 1.0);
        const ConvergenceTable table = convergence_sweep(u0, p, eps_list, 1.0, 2e-3, 10);
        for (std::size_t r = 1; r < table.rows.size(); ++r)
            if (!(table.rows[r].error < table.rows[r - 1].error)) ok = false;
        if (table.slope < 0.8) ok = false;
        detail += "tg_slope=" + fmt(table.slope);
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (secs > 120.0) ok = false;
    report(7, "eps -> 0 strong convergence (closed form + general sweep)", ok,
           detail + " runtime=" + fmt(secs) + "s");
}

// ---------------------------------------------------------------- criterion 8
void criterion_gronwall() {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p;
    p.nu = 5.0;
    p.l = 2.0;
    const SpectralField u0 = taylor_green_field(g, 2e-4);
    bool ok = true;
    double sup12 = 0.0, last_sup = std::numeric_limits<double>::infinity();
    for (int n : {4, 8, 12}) {
        const double eps_n = std::pow(2.0, -n);
        const SpectralField u0b = (1.0 + eps_n) * u0;
        const ContinuityReport rep = continuity_gronwall_check(p, u0, p, u0b, 1.0, 1e-2, 10);
        if (!rep.bound_holds || !std::isfinite(rep.c1_star)) ok = false;
        if (!(rep.sup_w < last_sup)) ok = false;
        last_sup = rep.sup_w;
        if (n == 12) sup12 = rep.sup_w;
    }
    if (!(sup12 < 1e-6)) ok = false;
    report(8, "difference bound with finite C1*, sup||w_12|| < 1e-6", ok,
           "sup12 = " + fmt(sup12));
}

// ---------------------------------------------------------------- criterion 9
void criterion_semicontinuity() {
    const WaveGrid g = make_grid(4, kTwoPi);
    PhysicsParams p;
    p.nu = 1.0;
    p.l = 2.0;
    p.forcing.base = shear_field(g, 0.5);
    const double fnorm = sobolev_norm(*p.forcing.base, 0.0);
    OmegaLimitSettings s;
    s.t1 = 20.0;
    s.n_samples = 4;
    s.gap = 0.5;
    s.dt = 0.01;
    const std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};

    bool ok = true;
    std::string detail;
    const SemicontinuityTable table = semicontinuity_experiment(p, zero_field(g), eps_list, s);
    if (!table.monotone_ok) ok = false;
    double worst = 0.0;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const double closed = fnorm * std::abs(1.0 / (1.0 + eps_list[i]) - 1.0);
        worst = std::max(worst, std::abs(table.rows[i].dist - closed) / closed);
        if (i > 0 && !(table.rows[i].dist < table.rows[i - 1].dist)) ok = false;
    }
    if (worst > 0.05) ok = false;
    detail += "closed_form_err=" + fmt(worst) + " ";

    // perturbed-forcing variant with delta(eps) = eps
    SpectralField pert(g);
    add_mode(pert, {0, 1, 0}, {0.0, 0.0, complexd{0.25, 0.0}});
    const PerturbedReport rep = perturbed_forcing_experiment(p, zero_field(g), pert, eps_list,
                                                             eps_list, s);
    if (!rep.both_trend_to_zero) ok = false;
    if (std::abs(rep.slope_vs_unperturbed - 1.0) > 0.15) ok = false;
    detail += "perturbed_slope=" + fmt(rep.slope_vs_unperturbed);
    report(9, "attractor-proxy semidistance vs fixed-point gap + perturbed variant", ok, detail);
}

// --------------------------------------------------------------- criterion 10
void criterion_metric_oracles() {
    const WaveGrid g = make_grid(4, kTwoPi);
    std::uint64_t seed = 100;
    auto random_set = [&](int npts) {
        TrajectorySet s;
        for (int i = 0; i < npts; ++i)
            s.points.push_back(random_solenoidal_field(g, 2.0, 1.0, seed++));
        return s;
    };
    bool ok = true;

    // brute-force re-evaluation of the hausdorff semidistance
    for (int trial = 0; trial < 20; ++trial) {
        const TrajectorySet X = random_set(1 + trial % 8);
        const TrajectorySet Y = random_set(1 + (trial * 3) % 8);
        double brute = 0.0;
        for (const auto& x : X.points) {
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& y : Y.points) {
                SpectralField d = x;
                d -= y;
                inf = std::min(inf, sobolev_norm(d, 0.0));
            }
            brute = std::max(brute, inf);
        }
        const double fast = hausdorff_semidistance(X, Y);
        if (std::abs(fast - brute) > 1e-12 * (brute + 1.0)) ok = false;
    }

    // triangle inequality on 100 random triples
    for (int trial = 0; trial < 100; ++trial) {
        const TrajectorySet X = random_set(1 + trial % 5);
        const TrajectorySet Y = random_set(1 + (trial * 7) % 5);
        const TrajectorySet Z = random_set(1 + (trial * 3) % 5);
        const double xz = hausdorff_semidistance(X, Z);
        const double xy = hausdorff_semidistance(X, Y);
        const double yz = hausdorff_semidistance(Y, Z);
        if (xz > xy + yz + 1e-12 * (xy + yz + 1.0)) ok = false;
    }

    // brute-force frechet evaluation on short random series
    const MetricSpec m{0.0, 2.0, 16};
    for (int trial = 0; trial < 20; ++trial) {
        Trajectory a, b;
        a.dt = b.dt = 0.5;
        for (int i = 0; i <= 8; ++i) {
            a.snapshot_times.push_back(0.5 * i);
            b.snapshot_times.push_back(0.5 * i);
            a.snapshots.push_back(random_solenoidal_field(g, 2.0, 0.05, seed++));
            b.snapshots.push_back(random_solenoidal_field(g, 2.0, 0.05, seed++));
        }
        double brute = 0.0;
        for (int n = 1; n <= m.n_max; ++n) {
            double acc = 0.0;
            for (int i = 0; i + 1 <= 8; ++i) {
                const double t0 = a.snapshot_times[i], t1 = a.snapshot_times[i + 1];
                if (t0 >= n) break;
                auto d2 = [&](int idx) {
                    SpectralField d = a.snapshots[idx];
                    d -= b.snapshots[idx];
                    return std::pow(sobolev_norm(d, 0.0), 2.0);
                };
                acc += 0.5 * (d2(i) + d2(i + 1)) * (std::min<double>(t1, n) - t0);
            }
            brute += std::pow(2.0, -n) * std::min(std::sqrt(acc), 1.0);
        }
        const double fast = frechet_metric(a, b, m);
        if (std::abs(fast - brute) > 1e-12 * (brute + 1.0)) ok = false;

        // triangle inequality with a third series
        Trajectory c;
        c.dt = 0.5;
        for (int i = 0; i <= 8; ++i) {
            c.snapshot_times.push_back(0.5 * i);
            c.snapshots.push_back(random_solenoidal_field(g, 2.0, 0.05, seed++));
        }
        const double ab = frechet_metric(a, b, m), ac = frechet_metric(a, c, m),
                     cb = frechet_metric(c, b, m);
        if (ab > ac + cb + 1e-12) ok = false;
    }
    report(10, "metric oracles: brute-force agreement and triangle inequality", ok);
}

// --------------------------------------------------------------- criterion 11
void criterion_persistence() {
    bool ok = true;
    const WaveGrid g = make_grid(16, kTwoPi);
    const SpectralField u = random_solenoidal_field(g, 2.0, 1.0, 314);
    const auto tmp = std::filesystem::temp_directory_path() /
                     ("hvns_acceptance_" + std::to_string(::getpid()) + ".bin");
    write_snapshot(u, SnapshotMeta{1.0, 0.1, 2.0, 4.5}, tmp);
    const LoadedSnapshot snap = read_snapshot(tmp);
    std::filesystem::remove(tmp);
    for (int c = 0; c < 3; ++c)
        if (!(snap.field.coeffs[c] == u.coeffs[c])) ok = false;

    const WaveGrid g8 = make_grid(8, kTwoPi);
    PhysicsParams p;
    p.nu = 0.4;
    p.eps = 0.0;
    p.l = 2.0;
    const SpectralField u0 = taylor_green_field(g8, 0.8);
    const Trajectory a = integrate(u0, p, 0.2, 0.01, 5);
    const Trajectory b = integrate_conventional(u0, p, 0.2, 0.01, 5);
    for (std::size_t s = 0; s < a.snapshots.size(); ++s)
        for (int c = 0; c < 3; ++c)
            if (!(a.snapshots[s].coeffs[c] == b.snapshots[s].coeffs[c])) ok = false;
    if (a.energy != b.energy || a.dual_dt != b.dual_dt) ok = false;
    report(11, "bitwise snapshot round trip and eps = 0 path equality", ok);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_trilinear();
    criterion_poincare();
    criterion_shear_oracle();
    criterion_energy_law_order();
    const std::vector<Trajectory> runs = damped_random_runs();
    criterion_decay_absorption(runs);
    criterion_window_bounds(runs);
    criterion_convergence();
    criterion_gronwall();
    criterion_semicontinuity();
    criterion_metric_oracles();
    criterion_persistence();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("acceptance suite: %d failure(s), %.1f s total\n", g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
