#include "mirrorflow/grid.hpp"

#include <cmath>
#include <string>

namespace mirrorflow {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw GeometryError(msg);
}

} // namespace

GridSpec::GridSpec(int n1, int n2, int n3, Geometry g, double x3_min, double x3_max)
    : n_{n1, n2, n3}, geometry_(g), x3_min_(x3_min), x3_max_(x3_max) {}

GridSpec GridSpec::periodic_cube(int n1, int n2, int n3) {
    require(n1 >= 4 && n2 >= 4 && n3 >= 4, "periodic cube needs n >= 4 per axis");
    require(n1 % 2 == 0 && n2 % 2 == 0 && n3 % 2 == 0,
            "periodic cube needs even point counts (real FFT layout)");
    return GridSpec(n1, n2, n3, Geometry::PeriodicCube, -1.0, 1.0);
}

GridSpec GridSpec::half_cube(int n1, int n2, int n3) {
    require(n1 >= 4 && n2 >= 4 && n1 % 2 == 0 && n2 % 2 == 0,
            "half cube needs even tangential counts >= 4");
    require(n3 >= 5 && n3 % 2 == 1,
            "half cube needs odd n3 >= 5 (embeds into a cube with 2*(n3-1) planes)");
    return GridSpec(n1, n2, n3, Geometry::HalfCube, -0.5, 0.5);
}

GridSpec GridSpec::slab(int n1, int n2, int n3, double x3_min, double x3_max) {
    require(n1 >= 4 && n2 >= 4 && n1 % 2 == 0 && n2 % 2 == 0,
            "slab needs even tangential counts >= 4");
    require(n3 >= 2 && x3_max > x3_min, "slab needs n3 >= 2 and a positive extent");
    GridSpec g(n1, n2, n3, Geometry::Slab, x3_min, x3_max);
    g.plane_index(0.0); // the distinguished boundary plane must be a sample plane
    return g;
}

GridSpec GridSpec::symmetric_slab(int n1, int n2, int n3) {
    require(n3 % 2 == 1, "symmetric slab needs odd n3 (plane x3=0 on the grid)");
    return slab(n1, n2, n3, -0.5, 0.5);
}

GridSpec GridSpec::upper_slab(int n1, int n2, int n3) {
    return slab(n1, n2, n3, 0.0, 0.5);
}

double GridSpec::length(int axis) const {
    if (axis < 2) return 2.0;
    return periodic_x3() ? 2.0 : x3_max_ - x3_min_;
}

double GridSpec::dx(int axis) const {
    if (axis < 2 || periodic_x3()) return length(axis) / n_[axis];
    return length(2) / (n_[2] - 1);
}

int GridSpec::plane_index(double c) const {
    const double d = dx(2);
    const double offset = periodic_x3() ? (c + 1.0) / d : (c - x3_min_) / d;
    const long k = std::lround(offset);
    const bool in_range = periodic_x3() ? (k >= 0 && k < n_[2]) : (k >= 0 && k <= n_[2] - 1);
    if (!in_range || std::abs(offset - static_cast<double>(k)) > 1e-9)
        throw AlignmentError("plane x3=" + std::to_string(c) + " is not a grid plane");
    return static_cast<int>(k);
}

std::vector<double> GridSpec::boundary_planes() const {
    switch (geometry_) {
        case Geometry::PeriodicCube: return {-0.5, 0.5};
        case Geometry::HalfCube: return {-0.5, 0.5};
        case Geometry::Slab: return {0.0};
    }
    return {};
}

GridSpec GridSpec::embedding_cube() const {
    if (geometry_ != Geometry::HalfCube)
        throw GeometryError("embedding_cube is defined for half-cube grids");
    return periodic_cube(n_[0], n_[1], 2 * (n_[2] - 1));
}

} // namespace mirrorflow
