#include "mirrorflow/reflection.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mirrorflow/stencil.hpp"

namespace mirrorflow {

namespace {

/// Index map j -> j' of the x3 reflection about `plane`, or AlignmentError.
std::vector<int> reflection_index_map(const GridSpec& g, double plane) {
    const int n3 = g.n3();
    const double d = g.dx(2);
    std::vector<int> map(n3);
    if (g.periodic_x3()) {
        // x3' = 2c - x3: j' = (2c+2)/dx - j (mod n3)
        const double t = (2.0 * plane + 2.0) / d;
        const long tl = std::lround(t);
        if (std::abs(t - static_cast<double>(tl)) > 1e-9)
            throw AlignmentError("reflection plane is not aligned with the periodic grid");
        for (int j = 0; j < n3; ++j) map[j] = static_cast<int>((((tl - j) % n3) + n3) % n3);
    } else {
        const double t = 2.0 * (plane - g.x3_min()) / d;
        const long tl = std::lround(t);
        if (std::abs(t - static_cast<double>(tl)) > 1e-9 || tl != n3 - 1)
            throw AlignmentError("grid is not symmetric about the reflection plane");
        for (int j = 0; j < n3; ++j) map[j] = static_cast<int>(tl) - j;
    }
    return map;
}

VectorField apply_x3_map(const VectorField& f, const std::vector<int>& map) {
    const GridSpec& g = f.grid();
    VectorField out(g);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    for (int c = 0; c < 3; ++c) {
        const double sign = c == 2 ? -1.0 : 1.0;
        const auto& src = f.component(c);
        auto& dst = out.component(c);
        for (int k = 0; k < g.n3(); ++k) {
            const double* s = src.data() + g.idx(0, 0, map[k]);
            double* d = dst.data() + g.idx(0, 0, k);
            for (std::size_t p = 0; p < plane_sz; ++p) d[p] = sign * s[p];
        }
    }
    return out;
}

} // namespace

VectorField reflect(const VectorField& f, double plane) {
    return apply_x3_map(f, reflection_index_map(f.grid(), plane));
}

VectorField mirror_symmetry(const VectorField& f) {
    if (f.grid().geometry() != Geometry::PeriodicCube || f.grid().n3() % 2 != 0)
        throw AlignmentError("mirror_symmetry needs a periodic cube with even n3");
    return reflect(f, 0.5);
}

SpectralVectorField mirror_symmetry(const SpectralVectorField& f) {
    const GridSpec& g = f.grid();
    SpectralVectorField out(g);
    const int n2 = g.n2(), n3 = g.n3(), nk1 = f.nk1();
    for (int c = 0; c < 3; ++c) {
        const double sign = c == 2 ? -1.0 : 1.0;
        const auto& src = f.component(c);
        auto& dst = out.component(c);
        for (int i3 = 0; i3 < n3; ++i3) {
            const int j3 = (n3 - i3) % n3;
            const double s = (i3 % 2 == 0 ? 1.0 : -1.0) * sign;
            for (int i2 = 0; i2 < n2; ++i2)
                for (int i1 = 0; i1 < nk1; ++i1)
                    dst[f.idx(i1, i2, i3)] = s * src[f.idx(i1, i2, j3)];
        }
    }
    return out;
}

namespace {

double defect_ratio(double norm_diff, double norm_f) {
    return norm_diff / std::max(norm_f, std::numeric_limits<double>::min());
}

} // namespace

double symmetry_defect(const VectorField& f) {
    const VectorField gf = mirror_symmetry(f);
    double diff2 = 0.0, norm2 = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& a = f.component(c);
        const auto& b = gf.component(c);
        for (std::size_t p = 0; p < a.size(); ++p) {
            const double d = a[p] - b[p];
            diff2 += d * d;
            norm2 += a[p] * a[p];
        }
    }
    return defect_ratio(std::sqrt(diff2), std::sqrt(norm2));
}

double symmetry_defect(const SpectralVectorField& f) {
    const SpectralVectorField gf = mirror_symmetry(f);
    const GridSpec& g = f.grid();
    double diff2 = 0.0, norm2 = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& a = f.component(c);
        const auto& b = gf.component(c);
        std::size_t p = 0;
        for (int i3 = 0; i3 < g.n3(); ++i3)
            for (int i2 = 0; i2 < g.n2(); ++i2)
                for (int i1 = 0; i1 < f.nk1(); ++i1, ++p) {
                    const double w = (i1 == 0 || i1 == g.n1() / 2) ? 1.0 : 2.0;
                    diff2 += w * std::norm(a[p] - b[p]);
                    norm2 += w * std::norm(a[p]);
                }
    }
    return defect_ratio(std::sqrt(diff2), std::sqrt(norm2));
}

VectorField mirror_extend_slab(const VectorField& f) {
    const GridSpec& g = f.grid();
    if (g.geometry() != Geometry::Slab || g.x3_min() != 0.0)
        throw AlignmentError("mirror_extend_slab takes data on a one-sided slab [0,h]");
    const int n3 = g.n3();
    const GridSpec out_grid = GridSpec::slab(g.n1(), g.n2(), 2 * n3 - 1, -g.x3_max(), g.x3_max());
    VectorField out(out_grid);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    for (int c = 0; c < 3; ++c) {
        const double sign = c == 2 ? -1.0 : 1.0;
        const auto& src = f.component(c);
        auto& dst = out.component(c);
        for (int k = 0; k < out_grid.n3(); ++k) {
            const int rel = k - (n3 - 1);
            const int src_k = rel >= 0 ? rel : -rel;
            const double s = rel >= 0 ? 1.0 : sign;
            const double* sp = src.data() + g.idx(0, 0, src_k);
            double* dp = dst.data() + out_grid.idx(0, 0, k);
            for (std::size_t p = 0; p < plane_sz; ++p) dp[p] = s * sp[p];
        }
    }
    return out;
}

VectorField mirror_extend_periodic(const VectorField& f) {
    const GridSpec& g = f.grid();
    if (g.geometry() != Geometry::HalfCube)
        throw AlignmentError("mirror_extend_periodic takes half-cube data");
    const GridSpec cube = g.embedding_cube();
    const int n3 = cube.n3();
    const int lo = n3 / 4; // cube plane index of the face x3 = -1/2
    VectorField out(cube);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    for (int c = 0; c < 3; ++c) {
        const double sign = c == 2 ? -1.0 : 1.0;
        const auto& src = f.component(c);
        auto& dst = out.component(c);
        for (int k = 0; k < n3; ++k) {
            int m = k - lo;
            double s = 1.0;
            if (m < 0 || m >= g.n3()) {
                // mirror image under x3 -> 1 - x3 (mod 2)
                const int k_ref = ((3 * n3 / 2 - k) % n3 + n3) % n3;
                m = k_ref - lo;
                s = sign;
            }
            const double* sp = src.data() + g.idx(0, 0, m);
            double* dp = dst.data() + cube.idx(0, 0, k);
            for (std::size_t p = 0; p < plane_sz; ++p) dp[p] = s * sp[p];
        }
    }
    return out;
}

VectorField restrict_half(const VectorField& a) {
    const GridSpec& g = a.grid();
    if (g.geometry() != Geometry::PeriodicCube || g.n3() % 4 != 0)
        throw AlignmentError("restrict_half needs a periodic cube with n3 divisible by 4");
    const GridSpec half = GridSpec::half_cube(g.n1(), g.n2(), g.n3() / 2 + 1);
    VectorField out(half);
    const int lo = g.n3() / 4;
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    for (int c = 0; c < 3; ++c) {
        const auto& src = a.component(c);
        auto& dst = out.component(c);
        for (int m = 0; m < half.n3(); ++m) {
            const double* sp = src.data() + g.idx(0, 0, lo + m);
            double* dp = dst.data() + half.idx(0, 0, m);
            for (std::size_t p = 0; p < plane_sz; ++p) dp[p] = sp[p];
        }
    }
    return out;
}

VectorField slab_upper_half(const VectorField& f) {
    const GridSpec& g = f.grid();
    if (g.geometry() != Geometry::Slab || g.x3_min() != -g.x3_max())
        throw AlignmentError("slab_upper_half takes a symmetric slab field");
    const int half_n3 = (g.n3() + 1) / 2;
    const GridSpec upper = GridSpec::slab(g.n1(), g.n2(), half_n3, 0.0, g.x3_max());
    VectorField out(upper);
    const int lo = g.plane_index(0.0);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    for (int c = 0; c < 3; ++c)
        for (int m = 0; m < half_n3; ++m) {
            const double* sp = f.component(c).data() + g.idx(0, 0, lo + m);
            double* dp = out.component(c).data() + upper.idx(0, 0, m);
            for (std::size_t p = 0; p < plane_sz; ++p) dp[p] = sp[p];
        }
    return out;
}

bool FitReport::all_below(double rel_tol, double floor) const {
    for (const auto& e : entries)
        if (e.jump > rel_tol * std::max(e.scale, floor)) return false;
    return true;
}

double FitReport::max_relative_jump() const {
    double m = 0.0;
    for (const auto& e : entries)
        if (e.scale > 0.0) m = std::max(m, e.jump / e.scale);
    return m;
}

void FitReport::to_csv(std::ostream& os) const {
    os << "plane,component,order,jump,scale,stencil_order\n";
    os.precision(17);
    for (const auto& e : entries)
        os << e.plane << ',' << e.component + 1 << ',' << e.order << ',' << e.jump << ','
           << e.scale << ',' << e.stencil_order << '\n';
}

FitReport fit_report(const VectorField& a, int max_order, int stencil_order) {
    const GridSpec& g = a.grid();
    std::vector<double> planes;
    if (g.geometry() == Geometry::PeriodicCube) {
        planes = {0.5, -0.5};
        // trace stencils plus the 2-plane interior probes must stay within one
        // mirror region
        if (max_order + stencil_order + 2 > g.n3() / 2)
            throw ResolutionError("fit_report: stencil footprint exceeds the mirror region");
    } else if (g.geometry() == Geometry::Slab && g.x3_min() == -g.x3_max()) {
        planes = {0.0};
    } else {
        throw AlignmentError("fit_report needs a periodic cube or a symmetric slab");
    }

    const double d = g.dx(2);
    FitReport rep;
    for (double plane : planes) {
        const int pidx = g.plane_index(plane);
        for (int m = 0; m <= max_order; ++m) {
            // Order 0 compares open extrapolations (the stored plane sample is
            // single-valued even when the true traces differ). Orders >= 1
            // anchor on the plane sample, which is legitimate once the order-0
            // trace fits and roughly halves the stencil reach per side.
            const bool anchored = m >= 1;
            const auto st_above =
                one_sided_stencil(d, m, stencil_order, TraceSide::Above, anchored);
            const auto st_below =
                one_sided_stencil(d, m, stencil_order, TraceSide::Below, anchored);
            for (int c = 0; c < 3; ++c) {
                const auto above = normal_derivative_plane(a, c, pidx, st_above);
                const auto below = normal_derivative_plane(a, c, pidx, st_below);
                double jump = 0.0, scale = 0.0;
                for (std::size_t p = 0; p < above.size(); ++p) {
                    jump = std::max(jump, std::abs(above[p] - below[p]));
                    scale = std::max(scale, std::max(std::abs(above[p]), std::abs(below[p])));
                }
                // probe the derivative magnitude a couple of planes into each side
                for (int side = 0; side < 2; ++side) {
                    const auto& st = side == 0 ? st_above : st_below;
                    const int shift = side == 0 ? 2 : -2;
                    const auto probe = normal_derivative_plane(a, c, pidx + shift, st);
                    for (double v : probe) scale = std::max(scale, std::abs(v));
                }
                rep.entries.push_back({plane, c, m, jump, scale, stencil_order});
            }
        }
    }
    return rep;
}

SymmetricGradientReport check_symmetric_gradient_reflection(const VectorField& f, double plane) {
    const GridSpec& g = f.grid();
    if (g.geometry() != Geometry::PeriodicCube)
        throw GeometryError("check_symmetric_gradient_reflection needs a periodic cube");
    const auto map = reflection_index_map(g, plane);

    const auto sym_grad = [&](const VectorField& u) {
        const SpectralVectorField su = to_spectral(u);
        std::array<std::array<std::vector<double>, 3>, 3> d; // d[i][j] = dj u_i
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) d[i][j] = partial_derivative(su, i, j);
        return d;
    };

    const auto df = sym_grad(f);
    const auto dg = sym_grad(reflect(f, plane));

    double dev = 0.0, scale = 0.0;
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const double sign = ((i == 2) != (j == 2)) ? -1.0 : 1.0;
            for (int k = 0; k < g.n3(); ++k) {
                const std::size_t at = g.idx(0, 0, k);
                const std::size_t at_ref = g.idx(0, 0, map[k]);
                for (std::size_t p = 0; p < plane_sz; ++p) {
                    const double Dij_g = 0.5 * (dg[i][j][at + p] + dg[j][i][at + p]);
                    const double Dij_f = 0.5 * (df[i][j][at_ref + p] + df[j][i][at_ref + p]);
                    dev = std::max(dev, std::abs(Dij_g - sign * Dij_f));
                    scale = std::max(scale, std::abs(Dij_f));
                }
            }
        }
    return {dev, scale};
}

} // namespace mirrorflow
