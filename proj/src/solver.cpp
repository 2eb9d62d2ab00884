#include "mirrorflow/solver.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "mirrorflow/reflection.hpp"

namespace mirrorflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Pointwise multiply by exp(-nu |kappa|^2 * tau).
void apply_viscous_factor(SpectralVectorField& u, double nu, double tau) {
    if (nu == 0.0 || tau == 0.0) return;
    const GridSpec& g = u.grid();
    const int nk1 = u.nk1();
    std::size_t p = 0;
    std::vector<double> factor(static_cast<std::size_t>(nk1) * g.n2() * g.n3());
    for (int i3 = 0; i3 < g.n3(); ++i3) {
        const int k3 = freq_of_index(i3, g.n3());
        for (int i2 = 0; i2 < g.n2(); ++i2) {
            const int k2 = freq_of_index(i2, g.n2());
            for (int i1 = 0; i1 < nk1; ++i1, ++p) {
                const double kx = kPi * i1, ky = kPi * k2, kz = kPi * k3;
                factor[p] = std::exp(-nu * tau * (kx * kx + ky * ky + kz * kz));
            }
        }
    }
    for (int c = 0; c < 3; ++c) {
        auto& comp = u.component(c);
        for (std::size_t q = 0; q < comp.size(); ++q) comp[q] *= factor[q];
    }
}

void axpy(SpectralVectorField& y, double a, const SpectralVectorField& x) {
    for (int c = 0; c < 3; ++c) {
        auto& yc = y.component(c);
        const auto& xc = x.component(c);
        for (std::size_t p = 0; p < yc.size(); ++p) yc[p] += a * xc[p];
    }
}

/// Nonlinear right-hand side N(u) = -P[nonlinearity(u)], dealiased. In
/// rotational form the gradient part of u x omega is absorbed by the
/// projection, so both forms project to the same semi-discrete system.
SpectralVectorField rhs_nonlinear(const SpectralVectorField& u, const SolverConfig& cfg,
                                  double* max_speed) {
    SpectralVectorField nl(u.grid());
    if (!cfg.rotational_form) {
        nl = advect_spectral(u, max_speed);
        for (int c = 0; c < 3; ++c)
            for (auto& v : nl.component(c)) v = -v;
    } else {
        // u x omega, omega = curl u, pseudo-spectral with the same dealiasing
        const GridSpec& g = u.grid();
        std::array<std::vector<double>, 3> om;
        VectorField uphys = to_physical(u);
        if (max_speed) {
            double m = 0.0;
            for (std::size_t p = 0; p < uphys.component(0).size(); ++p) {
                const double s = std::sqrt(uphys.component(0)[p] * uphys.component(0)[p] +
                                           uphys.component(1)[p] * uphys.component(1)[p] +
                                           uphys.component(2)[p] * uphys.component(2)[p]);
                m = std::max(m, s);
            }
            *max_speed = m;
        }
        const auto d = [&](int comp, int axis) { return partial_derivative(u, comp, axis); };
        om[0] = d(2, 1);
        om[1] = d(0, 2);
        om[2] = d(1, 0);
        {
            const auto a = d(1, 2), b = d(2, 0), c2 = d(0, 1);
            for (std::size_t p = 0; p < om[0].size(); ++p) {
                om[0][p] -= a[p];
                om[1][p] -= b[p];
                om[2][p] -= c2[p];
            }
        }
        VectorField cross(g);
        for (std::size_t p = 0; p < om[0].size(); ++p) {
            const double ux = uphys.component(0)[p], uy = uphys.component(1)[p],
                         uz = uphys.component(2)[p];
            cross.component(0)[p] = uy * om[2][p] - uz * om[1][p];
            cross.component(1)[p] = uz * om[0][p] - ux * om[2][p];
            cross.component(2)[p] = ux * om[1][p] - uy * om[0][p];
        }
        nl = to_spectral(cross);
        dealias_two_thirds(nl);
    }
    return leray_project(nl);
}

} // namespace

SpectralVectorField step(const SpectralVectorField& u, const SolverConfig& cfg,
                         bool* cfl_flag) {
    const double dt = cfg.dt;
    double max_speed = 0.0;

    // integrating-factor RK4: E = exp(-nu |kappa|^2 dt/2) per half step
    SpectralVectorField k1 = rhs_nonlinear(u, cfg, &max_speed);

    if (cfg.cfl_limit > 0.0) {
        const double dxmin = std::min({u.grid().dx(0), u.grid().dx(1), u.grid().dx(2)});
        const double cfl = dt * max_speed / dxmin;
        if (cfl > cfg.cfl_limit) {
            if (cfg.cfl_abort)
                throw CflError("CFL " + std::to_string(cfl) + " exceeds limit " +
                               std::to_string(cfg.cfl_limit));
            if (cfl_flag) *cfl_flag = true;
        }
    }

    SpectralVectorField stage = u; // u_n + dt/2 k1, then half-decayed
    axpy(stage, 0.5 * dt, k1);
    apply_viscous_factor(stage, cfg.nu, 0.5 * dt);
    SpectralVectorField k2 = rhs_nonlinear(stage, cfg, nullptr);

    stage = u;
    apply_viscous_factor(stage, cfg.nu, 0.5 * dt); // E u_n + dt/2 k2
    axpy(stage, 0.5 * dt, k2);
    SpectralVectorField k3 = rhs_nonlinear(stage, cfg, nullptr);

    stage = u;
    apply_viscous_factor(stage, cfg.nu, dt); // E^2 u_n + dt E k3
    apply_viscous_factor(k3, cfg.nu, 0.5 * dt);
    axpy(stage, dt, k3); // k3 now carries the E factor
    SpectralVectorField k4 = rhs_nonlinear(stage, cfg, nullptr);

    // u_{n+1} = E^2 u_n + dt/6 (E^2 k1 + 2 E k2 + 2 E k3 + k4)
    SpectralVectorField out = u;
    axpy(out, dt / 6.0, k1);
    apply_viscous_factor(out, cfg.nu, dt);     // carries E^2 (u_n + dt/6 k1)
    apply_viscous_factor(k2, cfg.nu, 0.5 * dt);
    axpy(out, dt / 3.0, k2);
    axpy(out, dt / 3.0, k3); // already half-decayed above
    axpy(out, dt / 6.0, k4);
    return leray_project(out);
}

void Trajectory::diagnostics_csv(std::ostream& os) const {
    os << "step,time,energy,max_div,symmetry_defect\n";
    os.precision(17);
    for (const auto& d : diagnostics)
        os << d.step << ',' << d.time << ',' << d.energy << ',' << d.max_div << ','
           << d.symmetry_defect << '\n';
}

Trajectory solve(const VectorField& a, const SolverConfig& cfg) {
    if (a.grid().geometry() != Geometry::PeriodicCube)
        throw GeometryError("solve integrates on the periodic cube");
    if (!a.all_finite()) throw BlowUpError("initial data contains NaN/Inf");
    if (cfg.dt <= 0.0 || cfg.t_end <= 0.0) throw Error("solve needs dt > 0 and t_end > 0");

    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    if (std::abs(nsteps * cfg.dt - cfg.t_end) > 1e-9 * std::max(cfg.t_end, 1.0))
        throw Error("t_end must be an integer number of steps (documented rounding)");

    Trajectory traj;
    SpectralVectorField u = to_spectral(a);
    dealias_two_thirds(u);
    u = leray_project(u);

    const auto record = [&](long step_idx, double t) {
        traj.diagnostics.push_back({step_idx, t, kinetic_energy(u), divergence_rel_spectral(u),
                                    symmetry_defect(u), grad_norm_sq(u)});
    };
    const auto snapshot = [&](long step_idx, double t, bool initial) {
        traj.times.push_back(t);
        traj.snapshots.push_back(initial ? a : to_physical(u));
        (void)step_idx;
    };

    record(0, 0.0);
    snapshot(0, 0.0, true);

    for (long s = 1; s <= nsteps; ++s) {
        const double t = static_cast<double>(s) * cfg.dt;
        bool cfl_hit = false;
        try {
            u = step(u, cfg, &cfl_hit);
        } catch (const CflError& e) {
            throw CflError(std::string(e.what()) + " at t=" + std::to_string(t));
        }
        if (cfl_hit) traj.cfl_warned = true;
        bool finite = true;
        for (int c = 0; c < 3 && finite; ++c)
            for (const auto& v : u.component(c))
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    finite = false;
                    break;
                }
        if (!finite)
            throw BlowUpError("NaN detected at step " + std::to_string(s) +
                              ", surviving horizon t=" + std::to_string(t - cfg.dt));
        record(s, t);
        if ((cfg.snap_every > 0 && s % cfg.snap_every == 0) || s == nsteps)
            snapshot(s, t, false);
    }
    return traj;
}

} // namespace mirrorflow
