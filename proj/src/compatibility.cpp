#include "mirrorflow/compatibility.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mirrorflow/reflection.hpp"
#include "mirrorflow/spectral.hpp"
#include "mirrorflow/stencil.hpp"

namespace mirrorflow {

const char* to_string(ResidualKind k) {
    switch (k) {
        case ResidualKind::SlipNormal: return "slip_normal";
        case ResidualKind::SlipTangential: return "slip_tangential";
        case ResidualKind::CompatOdd: return "compat";
        case ResidualKind::ForcedTrace: return "forced_trace";
        case ResidualKind::ForcedDivIdentity: return "forced_div_identity";
        case ResidualKind::Divergence: return "divergence";
    }
    return "?";
}

bool CompatReport::entry_ok(const CompatEntry& e) const {
    return e.residual <= tol_used * std::max(e.scale, 1e-300);
}

bool CompatReport::slip_ok() const {
    for (const auto& e : entries)
        if ((e.kind == ResidualKind::SlipNormal || e.kind == ResidualKind::SlipTangential) &&
            !entry_ok(e))
            return false;
    return true;
}

bool CompatReport::compat_ok() const {
    for (const auto& e : entries)
        if (e.kind == ResidualKind::CompatOdd && !entry_ok(e)) return false;
    return true;
}

double CompatReport::max_relative(ResidualKind kind) const {
    double m = 0.0;
    for (const auto& e : entries)
        if (e.kind == kind && e.scale > 0.0) m = std::max(m, e.residual / e.scale);
    return m;
}

void CompatReport::to_csv(std::ostream& os) const {
    os << "plane,kind,order,component,residual,scale\n";
    os.precision(17);
    for (const auto& e : entries)
        os << e.plane << ',' << to_string(e.kind) << ',' << e.order << ','
           << (e.component >= 0 ? e.component + 1 : 0) << ',' << e.residual << ',' << e.scale
           << '\n';
}

void CompatReport::summary(std::ostream& os) const {
    for (const auto& e : entries) {
        os << (entry_ok(e) ? "  ok   " : "  FAIL ") << to_string(e.kind) << " plane=" << e.plane
           << " order=" << e.order;
        if (e.component >= 0) os << " comp=" << e.component + 1;
        os << " residual=" << e.residual << " scale=" << e.scale << '\n';
    }
    os << (passed() ? "PASS" : "FAIL") << " (tol " << tol_used << ")\n";
}

namespace {

struct Face {
    double plane;
    TraceSide inward; // side of the plane where the data lives
};

std::vector<Face> data_faces(const GridSpec& g) {
    switch (g.geometry()) {
        case Geometry::HalfCube:
            return {{-0.5, TraceSide::Above}, {0.5, TraceSide::Below}};
        case Geometry::Slab:
            return {{0.0, TraceSide::Above}};
        case Geometry::PeriodicCube:
            break;
    }
    throw GeometryError("boundary validation needs half-cube or slab data");
}

std::vector<double> plane_slice(const VectorField& f, int c, int k) {
    const GridSpec& g = f.grid();
    const std::size_t sz = static_cast<std::size_t>(g.n1()) * g.n2();
    const double* p = f.component(c).data() + g.idx(0, 0, k);
    return std::vector<double>(p, p + sz);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Max |d^m f_c| of the inward-rooted stencil two planes into the interior,
/// used as the "near the plane" scale.
double interior_probe(const VectorField& f, int c, int pidx, const TraceStencil& st,
                      TraceSide inward) {
    const int shift = inward == TraceSide::Above ? 2 : -2;
    const int probe_plane = pidx + shift;
    if (!f.grid().periodic_x3() && (probe_plane < 0 || probe_plane >= f.grid().n3()))
        return 0.0;
    return max_abs(normal_derivative_plane(f, c, probe_plane, st));
}

} // namespace

CompatReport check_slip(const VectorField& f, double tol, int stencil_order) {
    const GridSpec& g = f.grid();
    CompatReport rep;
    rep.tol_used = tol;
    const double field_scale = f.max_abs();
    const double d = g.dx(2);

    for (const Face& face : data_faces(g)) {
        const int pidx = g.plane_index(face.plane);
        const auto u3 = plane_slice(f, 2, pidx);
        rep.entries.push_back({face.plane, ResidualKind::SlipNormal, 0, 2, max_abs(u3),
                               field_scale});

        const auto st = one_sided_stencil(d, 1, stencil_order, face.inward, true);
        for (int j = 0; j < 2; ++j) {
            const auto d3uj = normal_derivative_plane(f, j, pidx, st);
            const auto dju3 = tangential_derivative_plane(u3, g.n1(), g.n2(), j);
            double res = 0.0, scale = 0.0;
            for (std::size_t p = 0; p < d3uj.size(); ++p) {
                res = std::max(res, std::abs(d3uj[p] - dju3[p]));
                scale = std::max(scale, std::max(std::abs(d3uj[p]), std::abs(dju3[p])));
            }
            scale = std::max(scale, interior_probe(f, j, pidx, st, face.inward));
            rep.entries.push_back({face.plane, ResidualKind::SlipTangential, 1, j, res, scale});
        }
    }
    return rep;
}

CompatReport check_compat(const VectorField& f, int l0, double tol, int stencil_order) {
    const GridSpec& g = f.grid();
    CompatReport rep;
    rep.tol_used = tol;
    if (l0 <= 2) return rep; // no conditions below order 3

    const double d = g.dx(2);
    for (const Face& face : data_faces(g)) {
        const int pidx = g.plane_index(face.plane);
        for (int k = 3; k <= l0; k += 2) {
            const auto st = one_sided_stencil(d, k, stencil_order, face.inward, true);
            for (int j = 0; j < 2; ++j) {
                const auto tr = normal_derivative_plane(f, j, pidx, st);
                const double res = max_abs(tr);
                const double scale =
                    std::max(res, interior_probe(f, j, pidx, st, face.inward));
                rep.entries.push_back({face.plane, ResidualKind::CompatOdd, k, j, res, scale});
            }
        }
    }
    return rep;
}

namespace {

/// Interior divergence estimate on a non-periodic-x3 grid: tangential
/// derivatives spectral per plane, normal derivative from the widest centered
/// window available (one-sided at the ends), order >= q.
void divergence_rows(const VectorField& f, int q, CompatReport& rep) {
    const GridSpec& g = f.grid();
    const int n3 = g.n3();
    const double d = g.dx(2);
    double res = 0.0, scale = 0.0;
    for (int k = 0; k < n3; ++k) {
        // widest centered window of >= q+1 planes, shifted one-sided at the ends
        int lo = std::max(k - (q / 2 + 1), 0), hi = std::min(k + (q / 2 + 1), n3 - 1);
        if (hi - lo < q) {
            lo = std::max(0, std::min(lo, n3 - 1 - q));
            hi = std::min(n3 - 1, lo + q);
        }
        if (hi - lo < q) throw ResolutionError("divergence estimate: not enough planes");
        std::vector<double> nodes;
        std::vector<int> offsets;
        for (int s = lo; s <= hi; ++s) {
            offsets.push_back(s - k);
            nodes.push_back((s - k) * d);
        }
        const auto w = fd_weights(0.0, nodes, 1);

        std::vector<double> d3u3(static_cast<std::size_t>(g.n1()) * g.n2(), 0.0);
        for (std::size_t s = 0; s < offsets.size(); ++s) {
            const double* sp = f.component(2).data() + g.idx(0, 0, k + offsets[s]);
            for (std::size_t p = 0; p < d3u3.size(); ++p) d3u3[p] += w[s] * sp[p];
        }
        const auto d1u1 = tangential_derivative_plane(plane_slice(f, 0, k), g.n1(), g.n2(), 0);
        const auto d2u2 = tangential_derivative_plane(plane_slice(f, 1, k), g.n1(), g.n2(), 1);
        for (std::size_t p = 0; p < d3u3.size(); ++p) {
            res = std::max(res, std::abs(d1u1[p] + d2u2[p] + d3u3[p]));
            scale = std::max(scale,
                             std::abs(d1u1[p]) + std::abs(d2u2[p]) + std::abs(d3u3[p]));
        }
    }
    rep.entries.push_back({0.0, ResidualKind::Divergence, 1, -1, res, scale});
}

} // namespace

CompatReport forced_traces_report(const VectorField& f, const VectorField& extended, int l0,
                                  int stencil_order) {
    const GridSpec& fg = f.grid();
    const GridSpec& eg = extended.grid();

    // `extended` must be the mirror extension of the data
    VectorField expect(fg);
    if (fg.geometry() == Geometry::HalfCube && eg.geometry() == Geometry::PeriodicCube) {
        expect = mirror_extend_periodic(f);
    } else if (fg.geometry() == Geometry::Slab && fg.x3_min() == 0.0 &&
               eg.geometry() == Geometry::Slab && eg.x3_min() == -eg.x3_max()) {
        expect = mirror_extend_slab(f);
    } else {
        throw GeometryError("forced_traces_report: unsupported geometry pair");
    }
    if (extended.grid() != expect.grid() ||
        max_abs_diff(extended, expect) > 1e-12 * std::max(1.0, f.max_abs()))
        throw ValidationError("forced_traces_report: `extended` is not the extension of `f`");

    CompatReport rep;
    const double d = eg.dx(2);
    std::vector<Face> faces;
    if (eg.geometry() == Geometry::PeriodicCube)
        faces = {{-0.5, TraceSide::Above}, {0.5, TraceSide::Below}};
    else
        faces = {{0.0, TraceSide::Above}};

    divergence_rows(f, stencil_order, rep);

    for (const Face& face : faces) {
        const int pidx = eg.plane_index(face.plane);

        // order 0: a3 on the plane is a stored sample
        const auto a3 = plane_slice(extended, 2, pidx);
        double scale0 = extended.max_abs();
        rep.entries.push_back(
            {face.plane, ResidualKind::ForcedTrace, 0, 2, max_abs(a3), scale0});

        // order 1: d3 a_j, j = 1,2
        const auto st1 = one_sided_stencil(d, 1, stencil_order, face.inward, true);
        std::array<std::vector<double>, 2> t;
        for (int j = 0; j < 2; ++j) {
            t[j] = normal_derivative_plane(extended, j, pidx, st1);
            const double res = max_abs(t[j]);
            const double scale =
                std::max(res, interior_probe(extended, j, pidx, st1, face.inward));
            rep.entries.push_back({face.plane, ResidualKind::ForcedTrace, 1, j, res, scale});
        }

        // order 2: d3^2 a3
        const auto st2 = one_sided_stencil(d, 2, stencil_order, face.inward, true);
        const auto s2 = normal_derivative_plane(extended, 2, pidx, st2);
        {
            const double res = max_abs(s2);
            const double scale =
                std::max(res, interior_probe(extended, 2, pidx, st2, face.inward));
            rep.entries.push_back({face.plane, ResidualKind::ForcedTrace, 2, 2, res, scale});
        }

        // divergence identity on the plane: d3^2 a3 + sum_j d_j d3 a_j = 0
        {
            const auto d1t1 = tangential_derivative_plane(t[0], eg.n1(), eg.n2(), 0);
            const auto d2t2 = tangential_derivative_plane(t[1], eg.n1(), eg.n2(), 1);
            double res = 0.0, scale = 0.0;
            for (std::size_t p = 0; p < s2.size(); ++p) {
                res = std::max(res, std::abs(s2[p] + d1t1[p] + d2t2[p]));
                scale = std::max(scale, std::abs(s2[p]) + std::abs(d1t1[p]) +
                                            std::abs(d2t2[p]));
            }
            scale = std::max(scale, interior_probe(extended, 2, pidx, st2, face.inward));
            rep.entries.push_back(
                {face.plane, ResidualKind::ForcedDivIdentity, 2, -1, res, scale});
        }

        // order k+1 traces of a3 forced by the order-k compatibility condition
        for (int k = 3; k <= l0; k += 2) {
            const auto st = one_sided_stencil(d, k + 1, stencil_order, face.inward, true);
            const auto tr = normal_derivative_plane(extended, 2, pidx, st);
            const double res = max_abs(tr);
            const double scale =
                std::max(res, interior_probe(extended, 2, pidx, st, face.inward));
            rep.entries.push_back(
                {face.plane, ResidualKind::ForcedTrace, k + 1, 2, res, scale});
        }
    }
    return rep;
}

double Bump::value(double x, double y, double z) const {
    const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
    const double s = (dx * dx + dy * dy + dz * dz) / (radius * radius);
    if (s >= 1.0) return 0.0;
    const double t = 1.0 / (1.0 - s);
    if (t > 700.0) return 0.0; // exp underflows well before this
    return std::exp(1.0 - t);
}

std::array<double, 3> Bump::grad(double x, double y, double z) const {
    const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
    const double r2 = radius * radius;
    const double s = (dx * dx + dy * dy + dz * dz) / r2;
    if (s >= 1.0) return {0.0, 0.0, 0.0};
    const double t = 1.0 / (1.0 - s);
    if (t > 700.0) return {0.0, 0.0, 0.0};
    const double gp = -std::exp(1.0 - t) * t * t; // d/ds of exp(1 - 1/(1-s))
    return {gp * 2.0 * dx / r2, gp * 2.0 * dy / r2, gp * 2.0 * dz / r2};
}

double Bump::second(int i, int j, double x, double y, double z) const {
    const std::array<double, 3> rel{x - center[0], y - center[1], z - center[2]};
    const double r2 = radius * radius;
    const double s = (rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2]) / r2;
    if (s >= 1.0) return 0.0;
    const double t = 1.0 / (1.0 - s);
    if (t > 700.0) return 0.0;
    const double g = std::exp(1.0 - t);
    const double gp = -g * t * t;
    const double gpp = g * (t * t * t * t - 2.0 * t * t * t);
    // symmetric evaluation order so second(i,j) == second(j,i) exactly
    const double ab = rel[std::min(i, j)] * rel[std::max(i, j)];
    const double didj = gpp * 4.0 * ab / (r2 * r2);
    return i == j ? didj + gp * 2.0 / r2 : didj;
}

namespace {

void counterexample_preconditions(int n, const std::array<double, 3>& center, double radius,
                                  const GridSpec& g) {
    if (g.geometry() != Geometry::Slab)
        throw GeometryError("counterexample_field is generated on a slab grid");
    if (n < 2) throw Error("counterexample_field needs n >= 2");
    if (center[2] != 0.0)
        throw AlignmentError("counterexample center must lie on the boundary plane x3 = 0");
    if (std::abs(center[0]) + radius >= 1.0 || std::abs(center[1]) + radius >= 1.0)
        throw Error("counterexample support overflows the tangential periodic box");
    const double upper = g.x3_max();
    const double lower = g.x3_min() == 0.0 ? upper : -g.x3_min();
    if (radius > std::min(upper, lower))
        throw Error("counterexample support overflows the slab");
    for (int axis = 0; axis < 3; ++axis)
        if (radius < 8.0 * g.dx(axis))
            throw ResolutionError("counterexample bump needs >= 8 grid points per radius");
}

} // namespace

VectorField counterexample_field(int n, std::array<double, 3> center, double radius,
                                 const GridSpec& slab_grid) {
    counterexample_preconditions(n, center, radius, slab_grid);
    const Bump rho{center, radius};
    return VectorField::from_function(slab_grid, [&](double x, double y, double z) {
        const double zn = std::pow(z, n);
        const double znp1 = zn * z;
        const double r = rho.value(x, y, z);
        const auto dr = rho.grad(x, y, z);
        const double d3g = dr[2] * znp1 + (n + 1) * zn * r; // d3 (rho z^(n+1))
        return std::array<double, 3>{-d3g, d3g, znp1 * (dr[0] - dr[1])};
    });
}

double counterexample_divergence_residual(int n, std::array<double, 3> center, double radius,
                                          const GridSpec& slab_grid) {
    counterexample_preconditions(n, center, radius, slab_grid);
    const Bump rho{center, radius};
    double res = 0.0, scale = 0.0;
    for (int k = 0; k < slab_grid.n3(); ++k)
        for (int j = 0; j < slab_grid.n2(); ++j)
            for (int i = 0; i < slab_grid.n1(); ++i) {
                const double x = slab_grid.x1(i), y = slab_grid.x2(j), z = slab_grid.x3(k);
                const double zn = std::pow(z, n);
                const double znp1 = zn * z;
                const auto dr = rho.grad(x, y, z);
                // the six product-rule terms of div curl(rho w); they cancel
                // pairwise in exact arithmetic
                const double terms[6] = {
                    -znp1 * rho.second(0, 2, x, y, z), -(n + 1) * zn * dr[0],
                    znp1 * rho.second(1, 2, x, y, z),  (n + 1) * zn * dr[1],
                    (n + 1) * zn * (dr[0] - dr[1]),
                    znp1 * (rho.second(0, 2, x, y, z) - rho.second(1, 2, x, y, z))};
                double sum = 0.0, mag = 0.0;
                for (double t : terms) {
                    sum += t;
                    mag += std::abs(t);
                }
                res = std::max(res, std::abs(sum));
                scale = std::max(scale, mag);
            }
    return res / std::max(scale, 1e-300);
}

} // namespace mirrorflow
