#include "mirrorflow/field.hpp"

#include <algorithm>
#include <cmath>

namespace mirrorflow {

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

VectorField VectorField::from_function(const GridSpec& grid, const PointFn& fn) {
    VectorField f(grid);
    for (int k = 0; k < grid.n3(); ++k)
        for (int j = 0; j < grid.n2(); ++j)
            for (int i = 0; i < grid.n1(); ++i) {
                const auto v = fn(grid.x1(i), grid.x2(j), grid.x3(k));
                const std::size_t p = grid.idx(i, j, k);
                for (int c = 0; c < 3; ++c) f.data_[c][p] = v[c];
            }
    return f;
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (const auto& comp : data_)
        for (double v : comp) m = std::max(m, std::abs(v));
    return m;
}

bool VectorField::all_finite() const {
    for (const auto& comp : data_)
        for (double v : comp)
            if (!std::isfinite(v)) return false;
    return true;
}

namespace {

VectorField combine(const VectorField& a, const VectorField& b, double sb) {
    if (a.grid() != b.grid()) throw GeometryError("field arithmetic needs matching grids");
    VectorField r = a;
    for (int c = 0; c < 3; ++c) {
        auto& rc = r.component(c);
        const auto& bc = b.component(c);
        for (std::size_t p = 0; p < rc.size(); ++p) rc[p] += sb * bc[p];
    }
    return r;
}

} // namespace

VectorField operator+(const VectorField& a, const VectorField& b) { return combine(a, b, 1.0); }
VectorField operator-(const VectorField& a, const VectorField& b) { return combine(a, b, -1.0); }

VectorField operator*(double s, const VectorField& a) {
    VectorField r = a;
    for (int c = 0; c < 3; ++c)
        for (auto& v : r.component(c)) v *= s;
    return r;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
    if (a.grid() != b.grid()) throw GeometryError("field comparison needs matching grids");
    double m = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& ac = a.component(c);
        const auto& bc = b.component(c);
        for (std::size_t p = 0; p < ac.size(); ++p) m = std::max(m, std::abs(ac[p] - bc[p]));
    }
    return m;
}

} // namespace mirrorflow
