// mirrorflow: validate, extend, solve and sweep slip-boundary data through
// the mirror-extension pipeline on the periodic cube.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mirrorflow/compatibility.hpp"
#include "mirrorflow/io.hpp"
#include "mirrorflow/pipeline.hpp"
#include "mirrorflow/reflection.hpp"
#include "mirrorflow/solver.hpp"

namespace fs = std::filesystem;
using namespace mirrorflow;

namespace {

int worker_cap() {
    if (const char* env = std::getenv("MIRRORFLOW_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0; // library default (hardware concurrency)
}

void write_echo(const CLI::App* sub, const fs::path& path) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream os(path);
    if (!os) throw FormatError("cannot write config echo " + path.string());
    os << sub->config_to_str(true, false);
}

VectorField read_input(const std::string& path) {
    if (!fs::exists(path)) throw FormatError("no such file: " + path);
    return read_mfld(path);
}

CompatReport run_validation(const VectorField& f, int l0, double tol, int q) {
    CompatReport rep = check_slip(f, tol, q);
    CompatReport cc = check_compat(f, l0, tol, q);
    rep.entries.insert(rep.entries.end(), cc.entries.begin(), cc.entries.end());
    rep.tol_used = tol;
    return rep;
}

struct CheckOpts {
    std::string in, report, echo;
    int l0 = 4;
    double tol = 1e-6;
    int stencil_order = 6;
};

int cmd_check(const CheckOpts& o, const CLI::App* sub) {
    const VectorField f = read_input(o.in);
    if (f.grid().geometry() == Geometry::PeriodicCube)
        throw FormatError("check expects half-cube or slab data");
    const fs::path report = o.report.empty() ? fs::path(o.in + ".compat.csv")
                                             : fs::path(o.report);
    write_echo(sub, o.echo.empty() ? report.string() + ".config" : o.echo);
    const CompatReport rep = run_validation(f, o.l0, o.tol, o.stencil_order);
    write_csv(report, rep);
    rep.summary(std::cout);
    return rep.passed() ? 0 : 1;
}

struct ExtendOpts {
    std::string in, out, report, echo;
    int max_order = 4;
    int stencil_order = 6;
};

int cmd_extend(const ExtendOpts& o, const CLI::App* sub) {
    const VectorField f = read_input(o.in);
    if (f.grid().geometry() != Geometry::HalfCube)
        throw FormatError("extend expects half-cube data");
    write_echo(sub, o.echo.empty() ? o.out + ".config" : o.echo);
    const VectorField a = mirror_extend_periodic(f);
    write_mfld(o.out, a);
    if (!o.report.empty()) {
        const FitReport fit = fit_report(a, o.max_order, o.stencil_order);
        write_csv(fs::path(o.report), fit);
    }
    std::cout << "extended " << o.in << " -> " << o.out << "\n";
    return 0;
}

struct CounterexampleOpts {
    std::string out, echo;
    int n = 3;
    double radius = 0.3;
    std::vector<double> center{0.0, 0.0};
    int n1 = 64, n2 = 64, n3 = 129;
};

int cmd_counterexample(const CounterexampleOpts& o, const CLI::App* sub) {
    write_echo(sub, o.echo.empty() ? o.out + ".config" : o.echo);
    const GridSpec grid = GridSpec::symmetric_slab(o.n1, o.n2, o.n3);
    const VectorField v =
        counterexample_field(o.n, {o.center[0], o.center[1], 0.0}, o.radius, grid);
    write_mfld(o.out, v);
    std::cout << "counterexample n=" << o.n << " written to " << o.out << "\n";
    return 0;
}

struct SolveOpts {
    std::string in, out, echo;
    double nu = 0.0;
    double dt = 1e-3;
    double T = 0.5;
    int snap_every = 0;
    int l0 = 4;
    double tol = 1e-6;
    int stencil_order = 6;
    double cfl_limit = 0.5;
    bool no_cfl_abort = false;
    bool rotational = false;
};

SolverConfig to_config(const SolveOpts& o) {
    SolverConfig cfg;
    cfg.nu = o.nu;
    cfg.dt = o.dt;
    cfg.t_end = o.T;
    cfg.snap_every = o.snap_every;
    cfg.cfl_limit = o.cfl_limit;
    cfg.cfl_abort = !o.no_cfl_abort;
    cfg.rotational_form = o.rotational;
    return cfg;
}

void write_trajectory(const Trajectory& traj, const fs::path& dir) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
        write_mfld(dir / ("t_" + std::to_string(i) + ".mfld"), traj.snapshots[i]);
    std::ofstream os(dir / "diagnostics.csv");
    traj.diagnostics_csv(os);
}

int cmd_solve(const SolveOpts& o, const CLI::App* sub) {
    const VectorField f = read_input(o.in);
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_echo(sub, o.echo.empty() ? (dir / "resolved_config.txt").string() : o.echo);
    const SolverConfig cfg = to_config(o);

    if (f.grid().geometry() == Geometry::HalfCube) {
        const SlipSolveResult res = solve_slip(f, o.l0, cfg, o.tol, o.stencil_order);
        write_trajectory(res.trajectory, dir);
        write_csv(dir / "compat.csv", res.compat);
        write_csv(dir / "fit.csv", res.fit);
    } else if (f.grid().geometry() == Geometry::PeriodicCube) {
        const Trajectory traj = solve(f, cfg);
        write_trajectory(traj, dir);
    } else {
        throw FormatError("solve expects half-cube or cube data");
    }
    std::cout << "trajectory written to " << dir.string() << "\n";
    return 0;
}

struct SweepOpts {
    std::string in, out, echo;
    std::vector<double> nus;
    int l = 0;
    double dt = 1e-3;
    double T = 0.5;
    int snap_every = 25;
    int l0 = 4;
    double tol = 1e-6;
    std::uint64_t seed = 0;
};

int cmd_sweep(const SweepOpts& o, const CLI::App* sub) {
    const VectorField f = read_input(o.in);
    if (f.grid().geometry() != Geometry::HalfCube)
        throw FormatError("sweep expects half-cube data");
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_echo(sub, o.echo.empty() ? (dir / "resolved_config.txt").string() : o.echo);

    SolverConfig cfg;
    cfg.dt = o.dt;
    cfg.t_end = o.T;
    cfg.snap_every = o.snap_every;
    SweepResult result = inviscid_sweep(f, o.nus, o.l, cfg, o.l0, o.tol, worker_cap());
    result.seed = o.seed;
    write_csv(dir / "sweep.csv", result);
    result.to_csv(std::cout);
    if (!result.complete) {
        std::cerr << "sweep incomplete: " << result.failure << "\n";
        return 1;
    }
    return 0;
}

struct NormsOpts {
    std::string in, report, echo;
    int l = 0;
};

int cmd_norms(const NormsOpts& o, const CLI::App* sub) {
    const VectorField f = read_input(o.in);
    if (f.grid().geometry() != Geometry::HalfCube)
        throw FormatError("norms expects half-cube data");
    write_echo(sub, o.echo.empty() ? o.in + ".norms.config" : o.echo);
    const VectorField a = mirror_extend_periodic(f);
    const NormEquivalence eq = norm_equivalence_report(f, a, o.l);
    std::cout.precision(17);
    std::cout << "l=" << o.l << " half_norm=" << eq.half_norm << " cube_norm=" << eq.cube_norm
              << " ratio=" << eq.ratio << "\n";
    if (!o.report.empty()) {
        std::ofstream os(o.report);
        os.precision(17);
        os << "l,half_norm,cube_norm,ratio\n"
           << o.l << ',' << eq.half_norm << ',' << eq.cube_norm << ',' << eq.ratio << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mirror-extension toolkit for slip-boundary Navier-Stokes data"};
    app.require_subcommand(1);

    CheckOpts check_o;
    CLI::App* check = app.add_subcommand("check", "validate slip + compatibility conditions");
    check->set_config("--config");
    check->add_option("in", check_o.in, "input MFLD field (half-cube or slab)")->required();
    check->add_option("--l0", check_o.l0, "trace order (odd conditions in [3,l0])");
    check->add_option("--tol", check_o.tol, "relative tolerance");
    check->add_option("--stencil-order", check_o.stencil_order, "one-sided stencil order");
    check->add_option("--report", check_o.report, "CSV report path");
    check->add_option("--echo", check_o.echo, "resolved-config echo path");

    ExtendOpts ext_o;
    CLI::App* extend = app.add_subcommand("extend", "mirror-extend half-cube data to the cube");
    extend->set_config("--config");
    extend->add_option("in", ext_o.in, "input MFLD half-cube field")->required();
    extend->add_option("out", ext_o.out, "output MFLD cube field")->required();
    extend->add_option("--report", ext_o.report, "fit-report CSV path");
    extend->add_option("--max-order", ext_o.max_order, "highest trace order in the report");
    extend->add_option("--stencil-order", ext_o.stencil_order, "one-sided stencil order");
    extend->add_option("--echo", ext_o.echo, "resolved-config echo path");

    CounterexampleOpts ce_o;
    CLI::App* ce = app.add_subcommand("counterexample",
                                      "generate the order-n compatibility violator");
    ce->set_config("--config");
    ce->add_option("out", ce_o.out, "output MFLD slab field")->required();
    ce->add_option("--n", ce_o.n, "violated order (>= 2)");
    ce->add_option("--radius", ce_o.radius, "bump radius");
    ce->add_option("--center", ce_o.center, "bump center (x1 x2) on the plane")
        ->expected(2);
    ce->add_option("--n1", ce_o.n1, "grid points along x1");
    ce->add_option("--n2", ce_o.n2, "grid points along x2");
    ce->add_option("--n3", ce_o.n3, "grid points along x3 (odd)");
    ce->add_option("--echo", ce_o.echo, "resolved-config echo path");

    SolveOpts solve_o;
    CLI::App* solve_c = app.add_subcommand("solve", "integrate Navier-Stokes/Euler");
    solve_c->set_config("--config");
    solve_c->add_option("in", solve_o.in, "input MFLD field (half-cube or cube)")->required();
    solve_c->add_option("out", solve_o.out, "output directory")->required();
    solve_c->add_option("--nu", solve_o.nu, "kinematic viscosity (0 = Euler)");
    solve_c->add_option("--dt", solve_o.dt, "time step");
    solve_c->add_option("--T", solve_o.T, "horizon");
    solve_c->add_option("--snap-every", solve_o.snap_every, "snapshot cadence in steps");
    solve_c->add_option("--l0", solve_o.l0, "trace order for input validation");
    solve_c->add_option("--tol", solve_o.tol, "validation tolerance");
    solve_c->add_option("--stencil-order", solve_o.stencil_order, "stencil order");
    solve_c->add_option("--cfl-limit", solve_o.cfl_limit, "CFL safety limit");
    solve_c->add_flag("--no-cfl-abort", solve_o.no_cfl_abort, "warn instead of abort on CFL");
    solve_c->add_flag("--rotational", solve_o.rotational, "rotational-form nonlinearity");
    solve_c->add_option("--echo", solve_o.echo, "resolved-config echo path");

    SweepOpts sweep_o;
    CLI::App* sweep = app.add_subcommand("sweep", "viscosity sweep against one Euler run");
    sweep->set_config("--config");
    sweep->add_option("in", sweep_o.in, "input MFLD half-cube field")->required();
    sweep->add_option("out", sweep_o.out, "output directory")->required();
    sweep->add_option("--nus", sweep_o.nus, "viscosities (decreasing)")
        ->required()
        ->delimiter(',');
    sweep->add_option("--l", sweep_o.l, "Sobolev order of the error norm");
    sweep->add_option("--dt", sweep_o.dt, "time step");
    sweep->add_option("--T", sweep_o.T, "horizon");
    sweep->add_option("--snap-every", sweep_o.snap_every, "snapshot cadence in steps");
    sweep->add_option("--l0", sweep_o.l0, "trace order for input validation");
    sweep->add_option("--tol", sweep_o.tol, "validation tolerance");
    sweep->add_option("--seed", sweep_o.seed, "data seed recorded in the CSV");
    sweep->add_option("--echo", sweep_o.echo, "resolved-config echo path");

    NormsOpts norms_o;
    CLI::App* norms = app.add_subcommand("norms", "norm equivalence of data and extension");
    norms->set_config("--config");
    norms->add_option("in", norms_o.in, "input MFLD half-cube field")->required();
    norms->add_option("--l", norms_o.l, "Sobolev order");
    norms->add_option("--report", norms_o.report, "CSV report path");
    norms->add_option("--echo", norms_o.echo, "resolved-config echo path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(check_o, check);
        if (extend->parsed()) return cmd_extend(ext_o, extend);
        if (ce->parsed()) return cmd_counterexample(ce_o, ce);
        if (solve_c->parsed()) return cmd_solve(solve_o, solve_c);
        if (sweep->parsed()) return cmd_sweep(sweep_o, sweep);
        if (norms->parsed()) return cmd_norms(norms_o, norms);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SlipValidationError& e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
