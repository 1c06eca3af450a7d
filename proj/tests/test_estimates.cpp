#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hvns/dynamics.hpp"
#include "hvns/estimates.hpp"
#include "hvns/flows.hpp"

using namespace hvns;

namespace {
const double kTwoPi = 2.0 * M_PI;

/// shear amplitude giving the requested V0 norm on the unit box
double shear_amp_for_norm(const WaveGrid& g, double norm) {
    return norm * std::sqrt(2.0 / g.volume());
}

PhysicsParams shear_forced(const WaveGrid& g, double nu, double eps, double l, double fnorm) {
    PhysicsParams p;
    p.nu = nu;
    p.eps = eps;
    p.l = l;
    if (fnorm > 0.0) p.forcing.base = shear_field(g, shear_amp_for_norm(g, fnorm));
    return p;
}
}  // namespace

TEST_CASE("make_entry margin and pass semantics") {
    const EstimateEntry tight = make_entry("x", 1.0, 1.0 - 1e-9, 1e-8);
    CHECK(tight.margin == doctest::Approx(-1e-9));
    CHECK(tight.pass);
    const EstimateEntry fail = make_entry("x", 2.0, 1.0, 1e-8);
    CHECK_FALSE(fail.pass);
    const EstimateEntry ok = make_entry("x", 1.0, 2.0, 0.0);
    CHECK(ok.pass);
    CHECK(ok.margin == doctest::Approx(1.0));
}

TEST_CASE("energy balance on unforced shear decay") {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p = shear_forced(g, 1.0, 0.5, 2.0, 0.0);
    // small amplitude keeps the absolute quadrature residual near roundoff
    const SpectralField u0 = shear_field(g, 1e-4);
    const Trajectory traj = integrate(u0, p, 2.0, 0.002, 1 << 30);
    const EstimateEntry e = verify_energy_balance(traj);
    CHECK(e.name == "eq8y_energy_balance");
    CHECK(e.pass);
    CHECK(e.lhs <= 1e-10);
}

TEST_CASE("energy balance on a zero trajectory") {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p = shear_forced(g, 1.0, 0.0, 2.0, 0.0);
    const Trajectory traj = integrate(zero_field(g), p, 1.5, 0.01, 1 << 30);
    const EstimateEntry e = verify_energy_balance(traj);
    CHECK(e.pass);
    CHECK(e.lhs == 0.0);
}

TEST_CASE("entry time formula: nu = lambda1 = 1, R0 = 2, delta0 = 1, rho0 = 1/2") {
    const WaveGrid g = make_grid(8, kTwoPi);  // lambda1 = 1
    PhysicsParams p = shear_forced(g, 1.0, 0.0, 2.0, 0.5);  // ||f|| = 0.5 -> rho0 = 0.5
    const SpectralField u0 = shear_field(g, shear_amp_for_norm(g, 2.0));  // ||u0|| = 2
    const Trajectory traj = integrate(u0, p, 8.0, 0.002, 1 << 30);

    EstimateReport scalars;
    const auto entries = verify_decay_absorption(traj, &scalars, /*delta0=*/1.0);
    CHECK(scalars.rho0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(scalars.t0_theory == doctest::Approx(1.6094379124341003).epsilon(1e-12));
    // aligned shear forcing: ||u(t)|| = 0.5 + 1.5 e^{-t} crosses 1 at t = log 3
    CHECK(scalars.t0_empirical == doctest::Approx(std::log(3.0)).epsilon(1e-2));
    CHECK(scalars.t0_empirical <= scalars.t0_theory + traj.dt);
    for (const auto& e : entries) {
        INFO(e.name);
        CHECK(e.pass);
    }
}

TEST_CASE("decay absorption rejects short or degenerate runs") {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p = shear_forced(g, 1.0, 0.0, 2.0, 0.5);
    const SpectralField u0 = shear_field(g, shear_amp_for_norm(g, 2.0));
    const Trajectory shortrun = integrate(u0, p, 1.0, 0.01, 1 << 30);
    CHECK_THROWS_AS(verify_decay_absorption(shortrun), std::invalid_argument);
    const Trajectory ok = integrate(u0, p, 6.0, 0.01, 1 << 30);
    // delta0 at or below rho0 can never be entered permanently
    CHECK_THROWS_AS(verify_decay_absorption(ok, nullptr, 0.4), std::invalid_argument);
}

TEST_CASE("window bounds pass on the forced shear run and verify_all aggregates") {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p = shear_forced(g, 1.0, 0.0, 2.0, 0.5);
    const SpectralField u0 = shear_field(g, shear_amp_for_norm(g, 2.0));
    const Trajectory traj = integrate(u0, p, 8.0, 0.002, 1 << 30);

    const auto windows = verify_window_bounds(traj, 1.0, 1.0);
    REQUIRE(windows.size() == 5);
    CHECK(windows[0].name == "eq18_window");
    CHECK(windows[1].name == "eq18a_trailing_window");
    CHECK(windows[2].name == "eq2y_window_v0");
    CHECK(windows[3].name == "eq3y_window_v1");
    CHECK(windows[4].name == "eq20c_time_average");
    for (const auto& e : windows) {
        INFO(e.name);
        CHECK(e.pass);
    }

    const EstimateReport rep = verify_all(traj, 1.0, 1.0);
    CHECK(rep.all_pass());
    CHECK(rep.rho0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.sb > 0.0);
    CHECK_THROWS_AS(verify_window_bounds(traj, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(verify_window_bounds(traj, 1e-4), std::invalid_argument);
}

TEST_CASE("dual derivative sup matches the shear closed form") {
    const WaveGrid g = make_grid(8, kTwoPi);
    const double nu = 1.0, eps = 0.5, lambda = nu + eps;
    PhysicsParams p = shear_forced(g, nu, eps, 2.0, 0.0);
    const SpectralField u0 = shear_field(g, 1.0);
    const double e0 = std::pow(sobolev_norm(u0, 0.0), 2.0);
    const double dt = 1e-4;
    const Trajectory traj = integrate(u0, p, 1.5, dt, 1 << 30);
    EstimateReport scalars;
    const EstimateEntry e = verify_dual_derivative(traj, &scalars);
    // ||du/dt||_* = lambda ||u|| on the |k|=1 shell; sup window sits at t = 0
    const double closed = lambda * lambda * e0 * (1.0 - std::exp(-2.0 * lambda)) / (2.0 * lambda);
    CHECK(scalars.c2_empirical == doctest::Approx(closed).epsilon(1e-6));
    CHECK(e.pass);
}

TEST_CASE("sb norm of a steady single-mode state is 2||u*||") {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p = shear_forced(g, 1.0, 0.25, 2.0, 0.625);
    // u* = f/(nu + eps); starting there the trajectory is constant
    const SpectralField ustar = (1.0 / 1.25) * *p.forcing.base;
    const double dt = 1e-3;
    const Trajectory traj = integrate(ustar, p, 2.0, dt, 1 << 30);
    const double norm_star = sobolev_norm(ustar, 0.0);
    CHECK(sb_norm(traj) == doctest::Approx(2.0 * norm_star).epsilon(1e-9));
    const Trajectory shortrun = integrate(ustar, p, 0.5, dt, 1 << 30);
    CHECK_THROWS_AS(sb_norm(shortrun), std::invalid_argument);
}

TEST_CASE("spread entries vanish for identical sweep members") {
    const WaveGrid g = make_grid(8, kTwoPi);
    PhysicsParams p = shear_forced(g, 1.0, 0.1, 2.0, 0.5);
    const SpectralField u0 = shear_field(g, 1.0);
    const Trajectory traj = integrate(u0, p, 1.5, 0.005, 1 << 30);
    const std::vector<Trajectory> sweep{traj, traj, traj};
    const EstimateEntry dual = dual_derivative_spread(sweep);
    CHECK(dual.name == "eq5y_eps_independence");
    CHECK(dual.pass);
    CHECK(dual.lhs == 0.0);
    const EstimateEntry sb = sb_norm_spread(sweep);
    CHECK(sb.name == "eq7y_sb_independence");
    CHECK(sb.pass);
    CHECK(sb.lhs == 0.0);
}

TEST_CASE("spread entries stay small across a genuine eps sweep of shear runs") {
    const WaveGrid g = make_grid(8, kTwoPi);
    const SpectralField u0 = shear_field(g, 1.0);
    std::vector<Trajectory> sweep;
    for (double eps : {0.1, 0.05, 0.025, 0.0}) {
        PhysicsParams p = shear_forced(g, 1.0, eps, 2.0, 0.5);
        sweep.push_back(integrate(u0, p, 2.0, 0.005, 1 << 30));
    }
    CHECK(dual_derivative_spread(sweep).pass);
    CHECK(sb_norm_spread(sweep).pass);
}
