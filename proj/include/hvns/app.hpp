#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "hvns/attractor.hpp"
#include "hvns/config.hpp"
#include "hvns/dynamics.hpp"
#include "hvns/estimates.hpp"
#include "hvns/report_io.hpp"
#include "hvns/snapshot_io.hpp"

namespace hvns::app {

namespace fs = std::filesystem;

inline void write_snapshots(const Trajectory& traj, const PhysicsParams& p, const fs::path& dir) {
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.bin", i);
        write_snapshot(traj.snapshots[i],
                       SnapshotMeta{p.nu, p.eps, p.l, traj.snapshot_times[i]}, dir / name);
    }
}

inline int simulate(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const WaveGrid g = grid_from(cfg);
    const PhysicsParams p = physics_from(cfg, g);
    try {
        const Trajectory traj =
            integrate(initial_from(cfg, g), p, cfg.T, cfg.dt, cfg.snapshot_stride);
        write_series_csv(traj, out / "norms.csv");
        write_snapshots(traj, p, out);
    } catch (const BlowupError& e) {
        std::cerr << "simulate: blowup_guard tripped: " << e.what() << '\n';
        return 3;
    }
    std::cout << "simulate: wrote norms.csv and snapshots to " << out.string() << '\n';
    return 0;
}

inline int verify(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const WaveGrid g = grid_from(cfg);
    const PhysicsParams p = physics_from(cfg, g);
    EstimateReport rep;
    try {
        const Trajectory traj =
            integrate(initial_from(cfg, g), p, cfg.T, cfg.dt, cfg.snapshot_stride);
        write_series_csv(traj, out / "norms.csv");
        rep = verify_all(traj, cfg.window_r, cfg.delta0);
    } catch (const BlowupError& e) {
        rep.entries.push_back(make_entry("blowup_guard", 1.0, 0.0, 0.0));
        write_report(rep, out / "report.tsv");
        std::cerr << "verify: FAIL blowup_guard: " << e.what() << '\n';
        return 3;
    }
    write_report(rep, out / "report.tsv");
    bool ok = true;
    for (const auto& e : rep.entries) {
        std::cout << "verify: " << (e.pass ? "pass " : "FAIL ") << e.name << " margin="
                  << detail::fmt_g17(e.margin) << '\n';
        if (!e.pass) ok = false;
    }
    return ok ? 0 : 1;
}

inline int sweep_eps(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const WaveGrid g = grid_from(cfg);
    const PhysicsParams p = physics_from(cfg, g);
    if (cfg.eps_list.empty())
        throw std::invalid_argument("sweep-eps: experiment.eps_list is required");
    const SpectralField u0 = initial_from(cfg, g);

    const ConvergenceTable table =
        convergence_sweep(u0, p, cfg.eps_list, cfg.T, cfg.dt, cfg.snapshot_stride);
    std::vector<std::vector<double>> rows;
    for (const auto& r : table.rows) rows.push_back({r.eps, r.error, r.ok ? 1.0 : 0.0});
    write_table_csv("eps,error,ok", rows, out / "convergence.csv");

    // per-eps ledgers feeding the eps-independence entries
    std::vector<Trajectory> sweep;
    bool ok = true;
    for (double eps : cfg.eps_list) {
        PhysicsParams pe = p;
        pe.eps = eps;
        try {
            sweep.push_back(integrate(u0, pe, cfg.T, cfg.dt, cfg.snapshot_stride));
        } catch (const BlowupError& e) {
            std::cerr << "sweep-eps: FAIL blowup_guard at eps=" << eps << ": " << e.what()
                      << '\n';
            ok = false;
        }
    }
    EstimateReport rep;
    if (sweep.size() >= 2) {
        rep.entries.push_back(dual_derivative_spread(sweep));
        if (sweep.front().horizon() >= 1.0) rep.entries.push_back(sb_norm_spread(sweep));
    }
    write_report(rep, out / "report.tsv");
    for (const auto& r : table.rows)
        if (!r.ok) ok = false;
    for (const auto& e : rep.entries) {
        std::cout << "sweep-eps: " << (e.pass ? "pass " : "FAIL ") << e.name << '\n';
        if (!e.pass) ok = false;
    }
    std::cout << "sweep-eps: log-log slope " << detail::fmt_g17(table.slope) << '\n';
    return ok ? 0 : 1;
}

inline OmegaLimitSettings omega_settings(const RunConfig& cfg) {
    OmegaLimitSettings s;
    s.t1 = cfg.t1;
    s.n_samples = cfg.n_samples;
    s.gap = cfg.gap;
    s.dt = cfg.dt;
    s.delta0 = cfg.delta0;
    s.delta1 = cfg.delta1;
    return s;
}

inline int attractor_dist(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const WaveGrid g = grid_from(cfg);
    const PhysicsParams p = physics_from(cfg, g);
    if (cfg.eps_list.empty())
        throw std::invalid_argument("attractor-dist: experiment.eps_list is required");
    const SemicontinuityTable table = semicontinuity_experiment(
        p, initial_from(cfg, g), cfg.eps_list, omega_settings(cfg));
    std::vector<std::vector<double>> rows;
    for (const auto& r : table.rows) rows.push_back({r.eps, r.dist});
    write_table_csv("eps,dist", rows, out / "semicontinuity.csv");
    for (const auto& r : table.rows)
        std::cout << "attractor-dist: eps=" << detail::fmt_g17(r.eps) << " dist="
                  << detail::fmt_g17(r.dist) << '\n';
    if (!table.monotone_ok) {
        std::cerr << "attractor-dist: FAIL semicontinuity_monotone\n";
        return 1;
    }
    return 0;
}

inline int perturbed(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const WaveGrid g = grid_from(cfg);
    PhysicsParams p = physics_from(cfg, g);
    if (cfg.eps_list.empty())
        throw std::invalid_argument("perturbed: experiment.eps_list is required");
    if (!p.forcing.perturbation)
        throw std::invalid_argument("perturbed: perturb.mode.* entries are required");
    const SpectralField pg = *p.forcing.perturbation;
    p.forcing.perturbation.reset();
    p.forcing.delta = 0.0;
    // delta(eps) scales linearly down from perturb.delta at the largest eps
    std::vector<double> delta;
    for (double eps : cfg.eps_list)
        delta.push_back(cfg.perturb_delta * eps / cfg.eps_list.front());
    const PerturbedReport rep = perturbed_forcing_experiment(
        p, initial_from(cfg, g), pg, cfg.eps_list, delta, omega_settings(cfg));
    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.rows)
        rows.push_back({r.eps, r.delta, r.force_gap, r.dist_vs_unperturbed, r.dist_vs_base});
    write_table_csv("eps,delta,force_gap,dist_vs_unperturbed,dist_vs_base", rows,
                    out / "perturbed.csv");
    std::cout << "perturbed: log-log slope " << detail::fmt_g17(rep.slope_vs_unperturbed)
              << '\n';
    if (!rep.both_trend_to_zero) {
        std::cerr << "perturbed: FAIL perturbed_trend\n";
        return 1;
    }
    return 0;
}

/// Quick built-in example suite; exit 0 iff every check holds.
inline int selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << "selftest: " << (ok ? "pass " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    const WaveGrid g = make_grid(16, 2.0 * M_PI);
    check("lambda1_unit_box", std::abs(g.lambda1 - 1.0) < 1e-15);

    SpectralField u(g);
    add_mode(u, {1, 0, 0}, {0.0, complexd{0.0, -0.5}, 0.0});  // (0, sin x, 0)
    const double n2 = sobolev_norm(u, 0.0) * sobolev_norm(u, 0.0);
    check("sine_norm", std::abs(n2 - 0.5 * std::pow(2.0 * M_PI, 3)) < 1e-10);
    check("poincare_shell_one",
          std::abs(sobolev_norm(u, 1.0) - sobolev_norm(u, 0.0)) < 1e-12);

    const SpectralField r = random_solenoidal_field(g, 2.0, 1.0, 7);
    check("random_solenoidal", max_divergence_ratio(r) < 1e-12);
    check("projection_idempotent",
          sobolev_norm(leray_project(r) - r, 0.0) <= 1e-12 * sobolev_norm(r, 0.0));
    const double buuu = std::abs(trilinear_b(r, r, r));
    check("trilinear_buuu_zero",
          buuu <= 1e-10 * sobolev_norm(r, 0.0) * std::pow(sobolev_norm(r, 1.0), 2));

    PhysicsParams p;
    p.nu = 1.0;
    p.eps = 0.5;
    p.l = 2.0;
    const SpectralField sh = shear_field(g, 1.0);
    const Trajectory traj = integrate(sh, p, 0.5, 0.01, 10);
    const double predicted = std::exp(-2.0 * (p.nu + p.eps) * 0.5) * traj.energy.front();
    check("shear_decay", std::abs(traj.energy.back() - predicted) <= 1e-10 * traj.energy.front());

    const auto tmp = fs::temp_directory_path() / "hvns_selftest_snapshot.bin";
    write_snapshot(r, SnapshotMeta{1.0, 0.5, 2.0, 0.0}, tmp);
    const LoadedSnapshot snap = read_snapshot(tmp);
    bool bitwise = !snap.solenoidal_warning;
    for (int c = 0; c < 3 && bitwise; ++c) bitwise = snap.field.coeffs[c] == r.coeffs[c];
    fs::remove(tmp);
    check("snapshot_roundtrip", bitwise);

    const std::string cfg_text = serialize_config(RunConfig{});
    check("config_roundtrip", serialize_config(parse_config(cfg_text)) == cfg_text);

    return failures == 0 ? 0 : 1;
}

}  // namespace hvns::app
