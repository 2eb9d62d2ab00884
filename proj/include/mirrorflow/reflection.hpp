#pragma once

#include <iosfwd>
#include <vector>

#include "mirrorflow/field.hpp"
#include "mirrorflow/spectral.hpp"

namespace mirrorflow {

/// The reflection about the plane x3 = c: tangential components are composed
/// with the point reflection, the normal component is negated as well. Exact
/// sample permutation plus sign; the grid must be symmetric about the plane.
VectorField reflect(const VectorField& f, double plane);

/// The periodic-cube involution induced by the double mirror extension:
/// x3 -> 1 - x3 (mod 2), third component negated. Equals reflect(f, 1/2) on
/// the torus; fixed planes are x3 = +-1/2.
VectorField mirror_symmetry(const VectorField& f);
SpectralVectorField mirror_symmetry(const SpectralVectorField& f);

/// ||f - Gf||_L2 / max(||f||_L2, eps); zero exactly when the field is
/// invariant under the double-mirror symmetry.
double symmetry_defect(const VectorField& f);
double symmetry_defect(const SpectralVectorField& f);

/// Extend data on the one-sided slab [0,h] to the symmetric slab [-h,h]:
/// even in the tangential components, odd in the normal one. The result is
/// the unique extension fixed by the reflection about x3 = 0.
VectorField mirror_extend_slab(const VectorField& f);

/// Extend half-cube data to the periodic cube through the double mirror on
/// the faces x3 = +-1/2. The result is invariant under mirror_symmetry and
/// restricts back to the input exactly.
VectorField mirror_extend_periodic(const VectorField& f);

/// Copy the cube samples with x3 in [-1/2, 1/2] onto a half-cube grid.
VectorField restrict_half(const VectorField& a);

/// Upper half [0,h] of a symmetric slab field.
VectorField slab_upper_half(const VectorField& f);

/// Boundary-trace fitting diagnostics: one-sided estimates of d^m/dx3^m of
/// each component from above and below each reflection plane. Order 0 uses
/// open stencils (the stored plane sample is single-valued even when the true
/// traces differ); higher orders anchor on the plane sample.
struct FitEntry {
    double plane;
    int component; // 0-based
    int order;
    double jump;  // max over the plane of |trace_above - trace_below|
    double scale; // max |d^m a_j| at and near the plane
    int stencil_order;
};

struct FitReport {
    std::vector<FitEntry> entries;

    /// True when every jump is at or below rel_tol * max(scale, floor).
    bool all_below(double rel_tol, double floor = 0.0) const;
    double max_relative_jump() const;
    void to_csv(std::ostream& os) const;
};

FitReport fit_report(const VectorField& a, int max_order, int stencil_order);

/// Verifies the sign rule of the symmetric gradient under reflection:
/// D(Tu)_ij(x) = +-(Du)_ij(xbar), with the minus sign exactly when the index 3
/// appears an odd number of times in (i,j). Spectral derivatives both sides.
struct SymmetricGradientReport {
    double max_deviation; // worst violation over samples and index pairs
    double scale;         // max |Du| for relative comparison
    double relative() const { return scale > 0.0 ? max_deviation / scale : 0.0; }
};

SymmetricGradientReport check_symmetric_gradient_reflection(const VectorField& f, double plane);

} // namespace mirrorflow
