#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mirrorflow/compatibility.hpp"
#include "mirrorflow/reflection.hpp"
#include "mirrorflow/solver.hpp"

namespace mirrorflow {

/// Validation failure that carries the offending report.
class SlipValidationError : public ValidationError {
public:
    SlipValidationError(const std::string& msg, CompatReport rep)
        : ValidationError(msg), report(std::move(rep)) {}
    CompatReport report;
};

/// Sobolev norm of half-cube data measured through its mirror extension on
/// the embedding cube, divided by sqrt(2) (the mirror doubles every squared
/// integral).
double half_sobolev_norm(const VectorField& f, int l);

/// Independent L2 norm on the half-cube: trapezoidal quadrature in x3
/// (half-weight boundary planes), periodic quadrature tangentially.
double half_l2_trapezoid(const VectorField& f);

/// H^l norm on the half-cube built from derivatives: tangential spectral,
/// normal finite-difference of order q, multinomial weights matching the
/// (1+|kappa|^2)^l multiplier; trapezoidal quadrature.
double half_sobolev_fd(const VectorField& f, int l, int stencil_order = 6);

struct NormEquivalence {
    double half_norm; // independent half-domain norm
    double cube_norm; // norm of the extension on the cube
    double ratio;     // cube/half, exactly sqrt(2) for L2, reported otherwise
};

/// Eq-uivalence of the half-domain norm and the extension norm; `a` must be
/// the mirror extension of `f`.
NormEquivalence norm_equivalence_report(const VectorField& f, const VectorField& a, int l);

/// Slip residuals of a cube snapshot evaluated spectrally at the faces
/// x3 = +-1/2: max |u3| and max |omega_j| (j = 1,2), relative to the field
/// scale. For an exactly mirror-symmetric field both vanish.
struct SpectralSlipResidual {
    double normal;     // max |u3| on the faces / max |u|
    double tangential; // max |(curl u) x n| tangential part on the faces / scale
};
SpectralSlipResidual slip_residual_spectral(const VectorField& cube_field);

struct SlipSolveResult {
    Trajectory trajectory; // snapshots restricted to the half-cube
    CompatReport compat;   // input validation report
    FitReport fit;         // extension trace diagnostics
};

/// The end-to-end pipeline: validate (hard precondition), mirror-extend,
/// solve on the periodic cube, restrict every snapshot back to the half-cube.
SlipSolveResult solve_slip(const VectorField& f, int l0, const SolverConfig& cfg, double tol,
                           int stencil_order = 6);

struct SweepRow {
    double nu;
    double sup_error;   // sup over snapshot times of the H^l error vs Euler
    double final_error; // error at the final snapshot
    int l;
    double T;
};

struct SweepResult {
    std::vector<SweepRow> rows; // sorted by decreasing nu
    std::string grid_desc;
    double dt = 0.0;
    std::uint64_t seed = 0;
    bool complete = true;       // false when a member run failed
    std::string failure;

    void to_csv(std::ostream& os) const;
};

/// Viscosity sweep against a single Euler reference run: same data, grid, dt
/// and horizon for every member; errors measured in the H^l norm of the
/// half-cube (via the extension, / sqrt(2)). Members run concurrently.
SweepResult inviscid_sweep(const VectorField& f, const std::vector<double>& nus, int l,
                           const SolverConfig& cfg, int l0, double tol, int max_workers = 0);

/// Variant with viscosity-dependent initial data f_nu (same order as nus).
SweepResult inviscid_sweep(const std::vector<VectorField>& f_nu,
                           const std::vector<double>& nus, int l, const SolverConfig& cfg,
                           int l0, double tol, int max_workers = 0);

enum class InitialDataKind { ShearMode, RandomSymmetric, TaylorGreenLike };

/// Half-cube initial data that is divergence-free, slip-compatible and
/// compatible to all orders: built as the restriction of a Leray-projected,
/// mirror-symmetrized band-limited cube field. Deterministic per seed.
VectorField make_initial_data(InitialDataKind kind, const GridSpec& half_grid, int band,
                              std::uint64_t seed);

} // namespace mirrorflow
