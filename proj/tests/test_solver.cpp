#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mirrorflow/solver.hpp"
#include "test_util.hpp"

using namespace mirrorflow;
using mftest::kPi;

namespace {

VectorField decayed_shear(const GridSpec& g, double nu, double t) {
    const double factor = std::exp(-4.0 * kPi * kPi * nu * t);
    return VectorField::from_function(g, [factor](double, double, double z) {
        return std::array<double, 3>{factor * std::cos(2.0 * kPi * z), 0.0, 0.0};
    });
}

} // namespace

TEST_CASE("one step reproduces the decaying shear mode exactly") {
    const GridSpec g = GridSpec::periodic_cube(32, 32, 32);
    const VectorField u0 = mftest::shear_mode(g);
    SolverConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;

    const SpectralVectorField u1 = step(to_spectral(u0), cfg);
    const VectorField expect = decayed_shear(g, cfg.nu, cfg.dt);
    CHECK(mftest::rel_linf(to_physical(u1), expect) < 1e-12);
}

TEST_CASE("Euler keeps the shear mode steady to machine precision") {
    const GridSpec g = GridSpec::periodic_cube(32, 32, 32);
    const VectorField u0 = mftest::shear_mode(g);
    SolverConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    SpectralVectorField u = to_spectral(u0);
    for (int s = 0; s < 10; ++s) u = step(u, cfg);
    CHECK(mftest::rel_linf(to_physical(u), u0) < 1e-13);
}

TEST_CASE("zero data stays zero") {
    const GridSpec g = GridSpec::periodic_cube(16, 16, 16);
    SolverConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 1e-2;
    cfg.t_end = 0.1;
    const Trajectory traj = solve(VectorField(g), cfg);
    for (const auto& snap : traj.snapshots) CHECK(snap.max_abs() == 0.0);
    for (const auto& d : traj.diagnostics) CHECK(d.energy == 0.0);
}

TEST_CASE("solve reproduces the decaying shear over a long horizon") {
    const GridSpec g = GridSpec::periodic_cube(32, 32, 32);
    SolverConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.snap_every = 100;
    const Trajectory traj = solve(mftest::shear_mode(g), cfg);
    REQUIRE(traj.times.size() == 6);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(0.5).epsilon(1e-12));
    const VectorField expect = decayed_shear(g, cfg.nu, traj.times.back());
    CHECK(mftest::rel_linf(traj.snapshots.back(), expect) < 1e-8);
    // first snapshot is the initial data, bit exact
    CHECK(max_abs_diff(traj.snapshots.front(), mftest::shear_mode(g)) == 0.0);
}

TEST_CASE("trajectory diagnostics: divergence, energy law, symmetry") {
    const GridSpec half = GridSpec::half_cube(32, 32, 17);
    const VectorField f =
        mirror_extend_periodic(make_initial_data(InitialDataKind::RandomSymmetric, half, 2, 3));
    SolverConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;
    cfg.t_end = 0.1;
    cfg.snap_every = 20;
    const Trajectory traj = solve(f, cfg);

    SUBCASE("divergence stays at the projection level") {
        for (const auto& d : traj.diagnostics) CHECK(d.max_div < 1e-11);
    }
    SUBCASE("mirror symmetry persists") {
        for (const auto& d : traj.diagnostics) CHECK(d.symmetry_defect < 1e-12);
    }
    SUBCASE("viscous energy balance holds to the trapezoidal error") {
        // dE/dt = -nu ||grad u||^2, checked cumulatively over the run
        double dissipated = 0.0;
        for (std::size_t s = 1; s < traj.diagnostics.size(); ++s)
            dissipated += 0.5 * cfg.dt *
                          (traj.diagnostics[s - 1].grad_norm_sq +
                           traj.diagnostics[s].grad_norm_sq);
        const double e0 = traj.diagnostics.front().energy;
        const double eT = traj.diagnostics.back().energy;
        const double residual = std::abs(eT - e0 + cfg.nu * dissipated);
        CHECK(residual / (e0 * cfg.t_end) < 1e-6);
    }
}

TEST_CASE("Euler conserves energy") {
    const GridSpec half = GridSpec::half_cube(32, 32, 17);
    const VectorField f =
        mirror_extend_periodic(make_initial_data(InitialDataKind::RandomSymmetric, half, 5, 4));
    SolverConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-3;
    cfg.t_end = 0.1;
    const Trajectory traj = solve(f, cfg);
    const double e0 = traj.diagnostics.front().energy;
    for (const auto& d : traj.diagnostics) CHECK(std::abs(d.energy - e0) < 1e-9 * e0);
}

TEST_CASE("temporal self-convergence is fourth order") {
    const GridSpec half = GridSpec::half_cube(16, 16, 9);
    const VectorField f =
        mirror_extend_periodic(make_initial_data(InitialDataKind::RandomSymmetric, half, 4, 5));
    const double T = 0.1;

    const auto final_state = [&](double dt) {
        SolverConfig cfg;
        cfg.nu = 0.0;
        cfg.dt = dt;
        cfg.t_end = T;
        return solve(f, cfg).snapshots.back();
    };
    const VectorField ref = final_state(2.5e-4);
    const double e1 = max_abs_diff(final_state(4e-3), ref);
    const double e2 = max_abs_diff(final_state(2e-3), ref);
    const double e3 = max_abs_diff(final_state(1e-3), ref);
    CHECK(std::log2(e1 / e2) > 3.5);
    CHECK(std::log2(e2 / e3) > 3.5);
}

TEST_CASE("rotational and convective forms agree for band-limited data") {
    // with full dealiasing both nonlinearities project to the same
    // semi-discrete right-hand side; trajectories differ only by roundoff
    const GridSpec g = GridSpec::periodic_cube(16, 16, 16);
    VectorField f = mftest::random_solenoidal(g, 4, 6);
    f = (0.5 / f.max_abs()) * f;
    SolverConfig conv;
    conv.nu = 0.005;
    conv.dt = 1e-3;
    conv.t_end = 0.02;
    SolverConfig rot = conv;
    rot.rotational_form = true;
    const VectorField a = solve(f, conv).snapshots.back();
    const VectorField b = solve(f, rot).snapshots.back();
    CHECK(mftest::rel_linf(a, b) < 1e-10);
}

TEST_CASE("CFL guard") {
    const GridSpec g = GridSpec::periodic_cube(16, 16, 16);
    const VectorField f = 40.0 * mftest::shear_mode(g); // max|u| = 40, dx = 1/8
    SolverConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 1e-2; // CFL = 40 * 1e-2 / (1/8) = 3.2 > 0.5
    cfg.t_end = 0.1;
    CHECK_THROWS_AS(solve(f, cfg), CflError);

    cfg.cfl_abort = false;
    const Trajectory traj = solve(f, cfg);
    CHECK(traj.cfl_warned);
}

TEST_CASE("non-finite initial data is rejected") {
    const GridSpec g = GridSpec::periodic_cube(16, 16, 16);
    VectorField f(g);
    f.at(0, 0, 0, 0) = std::numeric_limits<double>::infinity();
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.01;
    CHECK_THROWS_AS(solve(f, cfg), BlowUpError);
}

TEST_CASE("solve validates the time grid") {
    const GridSpec g = GridSpec::periodic_cube(16, 16, 16);
    SolverConfig cfg;
    cfg.dt = 3e-3;
    cfg.t_end = 0.01; // not an integer number of steps
    CHECK_THROWS_AS(solve(VectorField(g), cfg), Error);
}
