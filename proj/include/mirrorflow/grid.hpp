#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mirrorflow/errors.hpp"

namespace mirrorflow {

enum class Geometry : std::uint8_t {
    PeriodicCube = 0, // (-1,1)^3, periodic in all directions
    HalfCube = 1,     // (-1,1)^2 x (-1/2,1/2), periodic tangentially, faces at x3 = +-1/2
    Slab = 2,         // (-1,1)^2 periodic tangentially, non-periodic x3 range with plane x3=0
};

/// Uniform tensor grid descriptor. Tangential axes (x1,x2) always cover
/// (-1,1) periodically (the right endpoint is excluded). The x3 axis is
/// periodic for PeriodicCube and endpoint-inclusive otherwise.
class GridSpec {
public:
    static GridSpec periodic_cube(int n1, int n2, int n3);
    /// n3 points spanning [-1/2, 1/2], both faces included; n3 must be odd so
    /// the grid embeds exactly into a periodic cube with 2*(n3-1) planes.
    static GridSpec half_cube(int n1, int n2, int n3);
    /// Slab over [x3_min, x3_max]; must contain the plane x3 = 0 as a sample.
    static GridSpec slab(int n1, int n2, int n3, double x3_min, double x3_max);
    /// Symmetric slab [-1/2,1/2], the canonical serializable slab (n3 odd).
    static GridSpec symmetric_slab(int n1, int n2, int n3);
    /// One-sided slab [0,1/2] used as the domain of mirror_extend_slab.
    static GridSpec upper_slab(int n1, int n2, int n3);

    Geometry geometry() const { return geometry_; }
    int n(int axis) const { return n_[axis]; }
    int n1() const { return n_[0]; }
    int n2() const { return n_[1]; }
    int n3() const { return n_[2]; }
    std::size_t size() const {
        return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    }

    bool periodic_x3() const { return geometry_ == Geometry::PeriodicCube; }

    double x3_min() const { return x3_min_; }
    double x3_max() const { return x3_max_; }
    double length(int axis) const;
    double dx(int axis) const;

    double x1(int i) const { return -1.0 + 2.0 * i / n_[0]; }
    double x2(int j) const { return -1.0 + 2.0 * j / n_[1]; }
    double x3(int k) const {
        return periodic_x3() ? -1.0 + 2.0 * k / n_[2] : x3_min_ + k * dx(2);
    }

    /// x1-fastest linear index.
    std::size_t idx(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(n_[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_[1]) * k);
    }

    /// Grid plane index of x3 = c; throws AlignmentError if c is not a sample plane.
    int plane_index(double c) const;

    /// x3 offsets of the distinguished flat boundary planes.
    /// HalfCube: {-1/2, +1/2}; Slab: {0}; PeriodicCube: {-1/2, +1/2} (the fixed
    /// planes of the double-mirror symmetry).
    std::vector<double> boundary_planes() const;

    /// The periodic cube a half-cube embeds into (n3_cube = 2*(n3-1)).
    GridSpec embedding_cube() const;

    bool operator==(const GridSpec& o) const = default;

private:
    GridSpec(int n1, int n2, int n3, Geometry g, double x3_min, double x3_max);

    std::array<int, 3> n_;
    Geometry geometry_;
    double x3_min_;
    double x3_max_;
};

} // namespace mirrorflow
