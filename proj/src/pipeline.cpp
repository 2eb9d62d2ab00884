#include "mirrorflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "mirrorflow/stencil.hpp"

namespace mirrorflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;

void require_half(const GridSpec& g, const char* op) {
    if (g.geometry() != Geometry::HalfCube)
        throw GeometryError(std::string(op) + " takes half-cube data");
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Squared trapezoidal L2 norm of one sample array on a half-cube/slab grid.
double trapezoid_sq(const GridSpec& g, const std::vector<double>& data) {
    const double cell = g.dx(0) * g.dx(1) * g.dx(2);
    double sum = 0.0;
    for (int k = 0; k < g.n3(); ++k) {
        const double w = (k == 0 || k == g.n3() - 1) ? 0.5 : 1.0;
        const double* p = data.data() + g.idx(0, 0, k);
        double plane = 0.0;
        const std::size_t sz = static_cast<std::size_t>(g.n1()) * g.n2();
        for (std::size_t q = 0; q < sz; ++q) plane += p[q] * p[q];
        sum += w * plane;
    }
    return cell * sum;
}

/// d^m/dx3^m along the non-periodic axis from the widest centered window of
/// order >= q (one-sided near the ends).
std::vector<double> fd_x3(const GridSpec& g, const std::vector<double>& data, int m, int q) {
    const int n3 = g.n3();
    const double d = g.dx(2);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    std::vector<double> out(data.size(), 0.0);
    const int reach = (m + q) / 2 + 1;
    for (int k = 0; k < n3; ++k) {
        int lo = std::max(k - reach, 0), hi = std::min(k + reach, n3 - 1);
        if (hi - lo + 1 < m + q) { // widen one-sided near the ends
            lo = std::max(0, std::min(lo, n3 - (m + q)));
            hi = std::min(n3 - 1, lo + (m + q) - 1);
        }
        if (hi - lo + 1 < m + q) throw ResolutionError("fd_x3: not enough planes");
        std::vector<double> nodes;
        for (int s = lo; s <= hi; ++s) nodes.push_back((s - k) * d);
        const auto w = fd_weights(0.0, nodes, m);
        double* op = out.data() + g.idx(0, 0, k);
        for (int s = lo; s <= hi; ++s) {
            const double* ip = data.data() + g.idx(0, 0, s);
            const double ws = w[s - lo];
            for (std::size_t p = 0; p < plane_sz; ++p) op[p] += ws * ip[p];
        }
    }
    return out;
}

/// Tangential spectral derivative of every plane of one component.
std::vector<double> tangential_all_planes(const GridSpec& g, const std::vector<double>& data,
                                          int axis) {
    std::vector<double> out(data.size());
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    std::vector<double> slice(plane_sz);
    for (int k = 0; k < g.n3(); ++k) {
        std::copy_n(data.data() + g.idx(0, 0, k), plane_sz, slice.begin());
        const auto d = tangential_derivative_plane(slice, g.n1(), g.n2(), axis);
        std::copy(d.begin(), d.end(), out.begin() + g.idx(0, 0, k));
    }
    return out;
}

} // namespace

double half_sobolev_norm(const VectorField& f, int l) {
    require_half(f.grid(), "half_sobolev_norm");
    return sobolev_norm(mirror_extend_periodic(f), l) / kSqrt2;
}

double half_l2_trapezoid(const VectorField& f) {
    if (f.grid().periodic_x3()) throw GeometryError("half_l2_trapezoid takes non-periodic x3");
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) sum += trapezoid_sq(f.grid(), f.component(c));
    return std::sqrt(sum);
}

double half_sobolev_fd(const VectorField& f, int l, int stencil_order) {
    const GridSpec& g = f.grid();
    if (g.periodic_x3()) throw GeometryError("half_sobolev_fd takes non-periodic x3");
    double sum = 0.0;
    for (int j = 0; j <= l; ++j) {
        double jfact = 1.0;
        for (int i = 2; i <= j; ++i) jfact *= i;
        for (int b1 = 0; b1 <= j; ++b1)
            for (int b2 = 0; b2 + b1 <= j; ++b2) {
                const int b3 = j - b1 - b2;
                double bfact = 1.0;
                for (int i = 2; i <= b1; ++i) bfact *= i;
                for (int i = 2; i <= b2; ++i) bfact *= i;
                for (int i = 2; i <= b3; ++i) bfact *= i;
                const double weight = binom(l, j) * jfact / bfact;
                for (int c = 0; c < 3; ++c) {
                    std::vector<double> d = f.component(c);
                    for (int r = 0; r < b1; ++r) d = tangential_all_planes(g, d, 0);
                    for (int r = 0; r < b2; ++r) d = tangential_all_planes(g, d, 1);
                    if (b3 > 0) d = fd_x3(g, d, b3, stencil_order);
                    sum += weight * trapezoid_sq(g, d);
                }
            }
    }
    return std::sqrt(sum);
}

NormEquivalence norm_equivalence_report(const VectorField& f, const VectorField& a, int l) {
    require_half(f.grid(), "norm_equivalence_report");
    const VectorField expect = mirror_extend_periodic(f);
    if (a.grid() != expect.grid() ||
        max_abs_diff(a, expect) > 1e-12 * std::max(1.0, f.max_abs()))
        throw ValidationError("norm_equivalence_report: `a` is not the mirror extension of `f`");
    NormEquivalence r{};
    r.half_norm = l == 0 ? half_l2_trapezoid(f) : half_sobolev_fd(f, l);
    r.cube_norm = sobolev_norm(a, l);
    r.ratio = r.half_norm > 0.0 ? r.cube_norm / r.half_norm : 1.0;
    return r;
}

SpectralSlipResidual slip_residual_spectral(const VectorField& cube_field) {
    const GridSpec& g = cube_field.grid();
    if (g.geometry() != Geometry::PeriodicCube)
        throw GeometryError("slip_residual_spectral takes a cube snapshot");
    const VectorField om = curl(cube_field);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    double nres = 0.0, tres = 0.0;
    for (double plane : {-0.5, 0.5}) {
        const int k = g.plane_index(plane);
        const double* u3 = cube_field.component(2).data() + g.idx(0, 0, k);
        const double* o1 = om.component(0).data() + g.idx(0, 0, k);
        const double* o2 = om.component(1).data() + g.idx(0, 0, k);
        for (std::size_t p = 0; p < plane_sz; ++p) {
            nres = std::max(nres, std::abs(u3[p]));
            tres = std::max(tres, std::max(std::abs(o1[p]), std::abs(o2[p])));
        }
    }
    const double uscale = std::max(cube_field.max_abs(), 1e-300);
    const double oscale = std::max(om.max_abs(), 1e-300);
    return {nres / uscale, tres / oscale};
}

SlipSolveResult solve_slip(const VectorField& f, int l0, const SolverConfig& cfg, double tol,
                           int stencil_order) {
    require_half(f.grid(), "solve_slip");
    CompatReport compat = check_slip(f, tol, stencil_order);
    {
        CompatReport cc = check_compat(f, l0, tol, stencil_order);
        compat.entries.insert(compat.entries.end(), cc.entries.begin(), cc.entries.end());
    }
    if (!compat.passed()) {
        std::ostringstream os;
        compat.summary(os);
        throw SlipValidationError("initial data fails slip/compatibility validation:\n" +
                                      os.str(),
                                  compat);
    }

    const VectorField a = mirror_extend_periodic(f);
    // diagnostic fit report; drop to a coarser stencil when the grid is small
    const int max_order = std::max(l0, 2);
    const int q_fit = std::min(stencil_order, std::max(1, a.grid().n3() / 2 - max_order - 2));
    SlipSolveResult out{Trajectory{}, std::move(compat), fit_report(a, max_order, q_fit)};

    Trajectory cube_traj = solve(a, cfg);
    out.trajectory.times = cube_traj.times;
    out.trajectory.diagnostics = cube_traj.diagnostics;
    out.trajectory.cfl_warned = cube_traj.cfl_warned;
    out.trajectory.snapshots.reserve(cube_traj.snapshots.size());
    for (const auto& snap : cube_traj.snapshots)
        out.trajectory.snapshots.push_back(restrict_half(snap));
    return out;
}

void SweepResult::to_csv(std::ostream& os) const {
    os << "nu,sup_error,final_error,l,T,grid,dt,seed\n";
    os.precision(17);
    for (const auto& r : rows)
        os << r.nu << ',' << r.sup_error << ',' << r.final_error << ',' << r.l << ',' << r.T
           << ',' << grid_desc << ',' << dt << ',' << seed << '\n';
}

namespace {

struct MemberOutcome {
    SweepRow row;
    std::string error;
};

} // namespace

SweepResult inviscid_sweep(const std::vector<VectorField>& f_nu,
                           const std::vector<double>& nus, int l, const SolverConfig& cfg,
                           int l0, double tol, int max_workers) {
    if (f_nu.empty() || f_nu.size() != nus.size())
        throw Error("inviscid_sweep: need one data field per viscosity");
    for (const auto& f : f_nu) require_half(f.grid(), "inviscid_sweep");

    // sort members by decreasing viscosity
    std::vector<std::size_t> order(nus.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nus[a] > nus[b]; });

    // validate every member up front (hard precondition, same as solve_slip)
    std::vector<VectorField> extensions;
    extensions.reserve(f_nu.size());
    for (const auto& f : f_nu) {
        CompatReport rep = check_slip(f, tol);
        CompatReport cc = check_compat(f, l0, tol);
        rep.entries.insert(rep.entries.end(), cc.entries.begin(), cc.entries.end());
        rep.tol_used = tol;
        if (!rep.passed()) {
            std::ostringstream os;
            rep.summary(os);
            throw SlipValidationError("sweep member fails validation:\n" + os.str(), rep);
        }
        extensions.push_back(mirror_extend_periodic(f));
    }

    // single Euler reference: data of the smallest viscosity (the nu -> 0 limit)
    SolverConfig euler_cfg = cfg;
    euler_cfg.nu = 0.0;
    const Trajectory ref = solve(extensions[order.back()], euler_cfg);
    std::vector<SpectralVectorField> ref_spec;
    ref_spec.reserve(ref.snapshots.size());
    for (const auto& s : ref.snapshots) ref_spec.push_back(to_spectral(s));

    const auto run_member = [&](std::size_t idx) -> MemberOutcome {
        MemberOutcome out{{nus[idx], 0.0, 0.0, l, cfg.t_end}, {}};
        try {
            SolverConfig mcfg = cfg;
            mcfg.nu = nus[idx];
            const Trajectory traj =
                nus[idx] == 0.0 ? ref : solve(extensions[idx], mcfg);
            if (traj.times.size() != ref.times.size())
                throw Error("sweep member snapshot times do not match the reference");
            double sup = 0.0, fin = 0.0;
            for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
                SpectralVectorField diff = to_spectral(traj.snapshots[s]);
                for (int c = 0; c < 3; ++c) {
                    auto& dc = diff.component(c);
                    const auto& rc = ref_spec[s].component(c);
                    for (std::size_t p = 0; p < dc.size(); ++p) dc[p] -= rc[p];
                }
                const double err = sobolev_norm(diff, l) / kSqrt2;
                sup = std::max(sup, err);
                fin = err;
            }
            out.row.sup_error = sup;
            out.row.final_error = fin;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        return out;
    };

    int workers = max_workers > 0 ? max_workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, workers);

    std::vector<MemberOutcome> outcomes(order.size());
    for (std::size_t base = 0; base < order.size();
         base += static_cast<std::size_t>(workers)) {
        std::vector<std::future<MemberOutcome>> batch;
        const std::size_t end = std::min(order.size(), base + workers);
        for (std::size_t i = base; i < end; ++i)
            batch.push_back(
                std::async(std::launch::async, run_member, order[i]));
        for (std::size_t i = base; i < end; ++i) outcomes[i] = batch[i - base].get();
    }

    SweepResult result;
    result.dt = cfg.dt;
    {
        const GridSpec& g = f_nu[0].grid();
        std::ostringstream os;
        os << "half_cube " << g.n1() << 'x' << g.n2() << 'x' << g.n3();
        result.grid_desc = os.str();
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!outcomes[i].error.empty()) {
            result.complete = false;
            result.failure = "nu=" + std::to_string(outcomes[i].row.nu) + ": " +
                             outcomes[i].error;
            break;
        }
        result.rows.push_back(outcomes[i].row);
    }
    return result;
}

SweepResult inviscid_sweep(const VectorField& f, const std::vector<double>& nus, int l,
                           const SolverConfig& cfg, int l0, double tol, int max_workers) {
    return inviscid_sweep(std::vector<VectorField>(nus.size(), f), nus, l, cfg, l0, tol,
                          max_workers);
}

namespace {

/// Deterministic standard normals: Box-Muller over mt19937_64 uniforms, so
/// the stream does not depend on the standard library's distribution choice.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    double uniform() {
        return (rng_() >> 11) * 0x1.0p-53; // [0,1) with 53 random bits
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_ = false;
};

} // namespace

VectorField make_initial_data(InitialDataKind kind, const GridSpec& half_grid, int band,
                              std::uint64_t seed) {
    require_half(half_grid, "make_initial_data");
    switch (kind) {
        case InitialDataKind::ShearMode:
            return VectorField::from_function(half_grid, [](double, double, double z) {
                return std::array<double, 3>{std::cos(2.0 * kPi * z), 0.0, 0.0};
            });
        case InitialDataKind::TaylorGreenLike:
            return VectorField::from_function(half_grid, [](double x, double y, double z) {
                const double g = std::cos(2.0 * kPi * z);
                return std::array<double, 3>{
                    0.5 * std::cos(kPi * x) * std::sin(kPi * y) * g,
                    -0.5 * std::sin(kPi * x) * std::cos(kPi * y) * g, 0.0};
            });
        case InitialDataKind::RandomSymmetric:
            break;
    }

    const GridSpec cube = half_grid.embedding_cube();
    if (band < 1 || 3 * band > cube.n1() || 3 * band > cube.n2() || 3 * band > cube.n3())
        throw ResolutionError("make_initial_data: band must satisfy 1 <= band <= n/3");

    NormalStream normal(seed);
    SpectralVectorField u(cube);
    for (int k1 = 0; k1 <= band; ++k1)
        for (int k2 = -band; k2 <= band; ++k2)
            for (int k3 = -band; k3 <= band; ++k3) {
                // canonical representative of each conjugate pair, skip the mean
                if (k1 == 0 && (k2 < 0 || (k2 == 0 && k3 <= 0))) continue;
                for (int c = 0; c < 3; ++c)
                    u.set_mode_pair(c, k1, k2, k3, {normal(), normal()});
            }

    // mirror-symmetrize, project, dealias: the restriction is slip- and
    // compatibility-clean by construction
    const SpectralVectorField gu = mirror_symmetry(u);
    for (int c = 0; c < 3; ++c) {
        auto& uc = u.component(c);
        const auto& gc = gu.component(c);
        for (std::size_t p = 0; p < uc.size(); ++p) uc[p] = 0.5 * (uc[p] + gc[p]);
    }
    u = leray_project(u);
    dealias_two_thirds(u);

    VectorField phys = to_physical(u);
    const double amp = phys.max_abs();
    if (amp > 0.0) phys = (0.5 / amp) * phys;
    return restrict_half(phys);
}

} // namespace mirrorflow
