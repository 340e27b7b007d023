#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "nrd/grid.hpp"
#include "nrd/kernel.hpp"
#include "nrd/reaction.hpp"

namespace nrd {

enum class ConvPath { fast, direct };

struct SnapshotSchedule {
    enum class Kind { dyadic, all, none, custom };
    Kind kind = Kind::dyadic;
    std::vector<long> steps; // used when kind == custom

    static SnapshotSchedule dyadic() { return {}; }
    static SnapshotSchedule all() { return {Kind::all, {}}; }
    static SnapshotSchedule none() { return {Kind::none, {}}; }
    static SnapshotSchedule at_steps(std::vector<long> s) { return {Kind::custom, std::move(s)}; }

    std::vector<long> resolve(long num_steps) const;
};

struct EvolveOptions {
    double dt = 0.5;
    long steps = 400;
    ConvPath path = ConvPath::fast;
    SnapshotSchedule schedule = SnapshotSchedule::dyadic();
    bool record_energy = false; // per-step E, E1 (reuses the step's convolution)
    double range_tol = 1e-9;    // slack on the [0,1] range diagnostic
    double boundary_frac = 0.05;
    double boundary_tol = 1e-3; // outer-collar contamination threshold
};

// Time series produced by run(): center trace u(t_k, 0) with per-state
// diagnostics and scheduled snapshots. The final field is always kept.
struct Trajectory {
    Grid grid;
    double dt = 0.5;
    long steps = 0;

    std::vector<double> center;     // size steps+1
    std::vector<double> max_u;      // size steps+1
    std::vector<double> min_u;      // size steps+1
    std::vector<double> sym_defect; // size steps+1
    std::vector<double> mono_defect;// size steps+1
    std::vector<double> dissipation;// size steps: dx * sum r_i^2 at state k
    std::vector<double> energy;     // size steps+1 when recorded
    std::vector<double> energy_e1;  // size steps+1 when recorded

    std::vector<long> snapshot_steps;
    std::vector<Field> snapshots;   // final field always included

    double boundary_peak = 0.0;     // max u seen over the outer collar
    bool domain_flagged = false;    // boundary_peak exceeded boundary_tol
    double range_low = 0.0;         // min over all states
    double range_high = 1.0;        // max over all states

    double time_at(long k) const { return dt * static_cast<double>(k); }
    const Field& final_field() const { return snapshots.back(); }
};

// u_i = 1 on |x_i| <= L, 0 elsewhere; exactly even on the symmetric node set.
Field initial_indicator(const Grid& grid, double L);

// One forward-Euler step of u_t = J*u - u - f(u). Refuses (never clamps)
// dt > 1/(1 + M_f), the discrete order-preservation restriction.
Field step(const Field& u, const DiscreteKernel& k, const Nonlinearity& nl, double dt);

// March `opts.steps` forward-Euler steps from u0, recording the center trace,
// diagnostics and scheduled snapshots. Aborts via numeric_error on the first
// non-finite value (the trajectory is not continued past it).
Trajectory run(const Field& u0, const DiscreteKernel& k, const Nonlinearity& nl,
               const EvolveOptions& opts);

// max_i |u_i - u_{M-i}|
double check_symmetry(const Field& u);

// Largest violation of "nonincreasing in |x|": max(0, u_{i+1} - u_i) over
// x_i >= 0 and the mirror on the left.
double check_radial_monotonicity(const Field& u);

struct TraceShape {
    double t_star = std::numeric_limits<double>::infinity();
    long violations = 0;
};

// Dip-then-rise pattern of the center trace: largest nonincreasing prefix
// (successive differences <= tol), then differences >= -tol afterwards.
// t_star = infinity when the trace never rises.
TraceShape center_trace_shape(const std::vector<double>& trace, double dt, double tol = 1e-9);
TraceShape center_trace_shape(const Trajectory& traj, double tol = 1e-9);

struct ModulusBound {
    double l0 = 0.0;    // inf (1 + f')
    double l1 = 0.0;    // total variation of the kernel samples ~ int |J'|
    double bound = 0.0; // 2 + l1 / l0
};

// Uniform Lipschitz-in-x constant 2 + L1/L0 of the flow; L1 approximates
// int |J'| by summed absolute differences of the kernel samples.
ModulusBound modulus_bound(const Nonlinearity& nl, const DiscreteKernel& k);

} // namespace nrd
