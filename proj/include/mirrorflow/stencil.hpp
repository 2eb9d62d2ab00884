#pragma once

#include <span>
#include <vector>

#include "mirrorflow/field.hpp"

namespace mirrorflow {

/// Finite-difference weights for the m-th derivative at x0 from the given
/// nodes (Fornberg's recursion); exact for polynomials of degree < nodes.size().
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

enum class TraceSide { Above, Below };

struct TraceStencil {
    std::vector<int> offsets; // plane offsets in grid steps, signed
    std::vector<double> weights; // already scaled by dx^-m
};

/// One-sided stencil estimating d^m/dx3^m at a plane from `q + m` planes on
/// one side. include_plane selects whether the plane itself is a node (used
/// when the plane sample belongs to the data being probed; trace comparisons
/// across a reflection plane must exclude it).
TraceStencil one_sided_stencil(double dx, int m, int q, TraceSide side, bool include_plane);

/// Evaluate the stencil for component `c` rooted at x3-plane `plane` over all
/// tangential points. Periodic wrap in x3 for cube grids; slabs throw
/// ResolutionError when planes run out.
std::vector<double> normal_derivative_plane(const VectorField& f, int c, int plane,
                                            const TraceStencil& st);

/// |sum_s w_s s^p| / p! for the dimensionless stencil weights: coefficient of
/// the order-p Taylor term left over by the stencil. Multiplied by
/// max|d^p f| * dx^(p-m) it bounds that term of the truncation error.
double stencil_series_coefficient(const TraceStencil& st, double dx, int m, int p);

/// d^m/dx3^m of one component at every plane, from the widest centered window
/// of order >= q (periodic wrap on cubes, one-sided near slab ends).
std::vector<double> normal_derivative_field(const VectorField& f, int comp, int m, int q);

} // namespace mirrorflow
