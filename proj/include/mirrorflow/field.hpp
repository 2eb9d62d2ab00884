#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mirrorflow/grid.hpp"

namespace mirrorflow {

/// Scalar sample array on a grid, x1-fastest.
class ScalarField {
public:
    explicit ScalarField(const GridSpec& grid) : grid_(grid), data_(grid.size(), 0.0) {}

    const GridSpec& grid() const { return grid_; }
    double& at(int i, int j, int k) { return data_[grid_.idx(i, j, k)]; }
    double at(int i, int j, int k) const { return data_[grid_.idx(i, j, k)]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    double max_abs() const;

private:
    GridSpec grid_;
    std::vector<double> data_;
};

/// Three-component real velocity sample array on a grid, component-major,
/// x1-fastest within each component.
class VectorField {
public:
    explicit VectorField(const GridSpec& grid)
        : grid_(grid), data_{std::vector<double>(grid.size(), 0.0),
                             std::vector<double>(grid.size(), 0.0),
                             std::vector<double>(grid.size(), 0.0)} {}

    using PointFn = std::function<std::array<double, 3>(double, double, double)>;
    static VectorField from_function(const GridSpec& grid, const PointFn& fn);

    const GridSpec& grid() const { return grid_; }

    double& at(int c, int i, int j, int k) { return data_[c][grid_.idx(i, j, k)]; }
    double at(int c, int i, int j, int k) const { return data_[c][grid_.idx(i, j, k)]; }

    std::vector<double>& component(int c) { return data_[c]; }
    const std::vector<double>& component(int c) const { return data_[c]; }

    double max_abs() const;
    bool all_finite() const;

    bool operator==(const VectorField& o) const = default;

private:
    GridSpec grid_;
    std::array<std::vector<double>, 3> data_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

/// max_i |a_i - b_i| over all samples and components.
double max_abs_diff(const VectorField& a, const VectorField& b);

} // namespace mirrorflow
