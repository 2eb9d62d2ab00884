#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mirrorflow/field.hpp"

namespace mirrorflow {

enum class ResidualKind {
    SlipNormal,        // |u3| on a boundary plane
    SlipTangential,    // |d3 u_j - d_j u3| on a boundary plane
    CompatOdd,         // |d3^k u_j| on a boundary plane, odd k >= 3
    ForcedTrace,       // traces forced to vanish by slip + divergence-free
    ForcedDivIdentity, // residual of -d3^2 a3 = sum_j d_j d3 a_j on the plane
    Divergence,        // interior divergence estimate of the data itself
};

const char* to_string(ResidualKind k);

struct CompatEntry {
    double plane;
    ResidualKind kind;
    int order;     // normal-derivative order involved
    int component; // 0-based, -1 when not per-component
    double residual;
    double scale; // max of the same quantity at and near the plane
};

struct CompatReport {
    std::vector<CompatEntry> entries;
    double tol_used = 0.0;

    bool entry_ok(const CompatEntry& e) const;
    bool slip_ok() const;
    bool compat_ok() const;
    bool passed() const { return slip_ok() && compat_ok(); }
    /// Worst residual/scale over entries of one kind (0 when none).
    double max_relative(ResidualKind kind) const;
    void to_csv(std::ostream& os) const;
    void summary(std::ostream& os) const;
};

/// Slip-condition residuals on each boundary plane: |u3| and
/// |d3 u_j - d_j u3| (normal derivative one-sided of order q from the data
/// side, tangential derivatives spectral on the plane).
CompatReport check_slip(const VectorField& f, double tol, int stencil_order = 6);

/// Residuals of the odd-order conditions d3^k u_j = 0 (j = 1,2) on each
/// boundary plane for odd k in [3, l0]. Vacuous pass (no entries) when
/// l0 <= 2.
CompatReport check_compat(const VectorField& f, int l0, double tol, int stencil_order = 6);

/// Verifies the traces that slip + divergence-free force to vanish on the
/// extension (orders 0,1,2 and the divergence identity at the plane), plus
/// the order-(k+1) traces of a3 for odd k in [3, l0]. Also reports an
/// interior divergence estimate of the data; a failing divergence
/// precondition shows up as a large Divergence row, never as an exception.
CompatReport forced_traces_report(const VectorField& f, const VectorField& extended,
                                  int l0 = 0, int stencil_order = 6);

/// The smooth compactly supported profile rho(x) = exp(1 - 1/(1 - |x-c|^2/r^2))
/// inside the ball B(c,r), zero outside; rho(c) = 1.
struct Bump {
    std::array<double, 3> center;
    double radius;

    double value(double x, double y, double z) const;
    std::array<double, 3> grad(double x, double y, double z) const;
    /// d_i d_j rho
    double second(int i, int j, double x, double y, double z) const;
};

/// Divergence-free field v = curl(rho * w), w = x3^(n+1) (1,1,0): satisfies
/// slip and every compatibility order below n, and violates order n with
/// boundary trace d3^n v = rho * (n+1)! * (-1,1,0) on the plane x3 = 0.
VectorField counterexample_field(int n, std::array<double, 3> center, double radius,
                                 const GridSpec& slab_grid);

/// Relative size of div v for the counterexample, evaluated from the
/// closed-form derivatives (the six product-rule terms cancel pairwise in
/// exact arithmetic; the residual is floating-point cancellation only).
double counterexample_divergence_residual(int n, std::array<double, 3> center, double radius,
                                          const GridSpec& slab_grid);

} // namespace mirrorflow
