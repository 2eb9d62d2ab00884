#pragma once

#include <iosfwd>
#include <vector>

#include "mirrorflow/spectral.hpp"

namespace mirrorflow {

struct SolverConfig {
    double nu = 0.0;       // kinematic viscosity, >= 0 (0 = Euler)
    double dt = 1e-3;      // time step
    double t_end = 1.0;    // horizon
    int snap_every = 0;    // snapshot cadence in steps; 0 = endpoints only
    double cfl_limit = 0.5;
    bool cfl_abort = true;        // abort (throw) vs warn once on CFL violation
    bool rotational_form = false; // u x omega nonlinearity instead of (u.grad)u
};

struct StepDiagnostics {
    long step;
    double time;
    double energy;
    double max_div;         // relative spectral divergence
    double symmetry_defect; // ||u - Gu|| / ||u||
    double grad_norm_sq;    // ||grad u||_L2^2 (for the energy balance)
};

struct Trajectory {
    std::vector<double> times;          // snapshot times, strictly increasing
    std::vector<VectorField> snapshots; // first entry equals the initial data
    std::vector<StepDiagnostics> diagnostics; // one row per step, plus t=0
    bool cfl_warned = false;

    void diagnostics_csv(std::ostream& os) const;
};

/// One integrating-factor RK4 step of du/dt = -P[(u.grad)u] + nu Laplace u.
/// The viscous term is integrated exactly by exp(-nu |kappa|^2 dt); the input
/// must already be projected and dealiased (solve() maintains this). A CFL
/// violation throws when cfg.cfl_abort, otherwise sets *cfl_flag and proceeds.
SpectralVectorField step(const SpectralVectorField& u, const SolverConfig& cfg,
                         bool* cfl_flag = nullptr);

/// Integrate from initial data `a` (projected and dealiased internally before
/// the first step). Throws CflError/BlowUpError with the surviving time in
/// the message.
Trajectory solve(const VectorField& a, const SolverConfig& cfg);

} // namespace mirrorflow
