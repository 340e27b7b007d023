#pragma once

#include <vector>

#include "nrd/evolve.hpp"
#include "nrd/grid.hpp"
#include "nrd/kernel.hpp"
#include "nrd/reaction.hpp"

namespace nrd {

// Smooth left/right transition eta with eta(x) = 1 for x <= 0 and
// eta(x) = 0 for x >= 1; quintic smoothstep in between (C^2, enough for
// quadrature accuracy). Grid samples kept for the invariant checks.
struct CutoffProfile {
    Grid grid;
    std::vector<double> samples; // eta(x_i)

    static double value(double x);
    static CutoffProfile on_grid(const Grid& grid);
};

struct EnergyValues {
    double total = 0.0;     // E = E1 + int F(u)
    double dirichlet = 0.0; // E1 >= 0
};

struct LyapunovValues {
    double V = 0.0;
    double Q = 0.0; // >= 0, the truncated dissipation
};

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> E1;
    std::vector<double> V;
    std::vector<double> Q;
    std::vector<double> P;           // centered-difference V'(t) - Q(t)
    std::vector<double> dissipation; // per-step dx*sum(u_t)^2 from the run
};

// Repeated functional evaluation against one kernel/grid pair; owns the fast
// convolver and the local-mass field (J*1) so that
//   E1 = 1/2 dx sum_i w_i u_i [ (J*1)_i u_i - (J*u)_i ]
// is evaluated exactly as the trapezoid double sum.
class EnergyEvaluator {
public:
    EnergyEvaluator(const Grid& grid, const DiscreteKernel& k, const Nonlinearity& nl);

    EnergyValues energy(const Field& u);
    LyapunovValues lyapunov(const Field& u, double t, const CutoffProfile& eta);

    const Field& local_mass() const { return local_mass_; }

private:
    const DiscreteKernel& kernel_;
    const Nonlinearity& nl_;
    FastConvolver conv_;
    Field local_mass_;
    Field scratch_;
};

EnergyValues energy(const Field& u, const DiscreteKernel& k, const Nonlinearity& nl);

// Left truncation of the threshold analysis:
//   w(x) = eta(-x - t) u(x)        for x < 0,
//   w(x) = 1 - eta(x) (1 - u(x))   for x >= 0;
// w == 0 for x <= -t-1 and w == 1 for x >= 1. Requires -t-1 and 1 interior.
Field truncate_left(const Field& u, double t, const CutoffProfile& eta);

// Truncated Lyapunov functional and its dissipation:
//   V = dx sum_i w'_i [ 1/2 ((J*w)_i - w_i) w_i - F(w_i) + H(x_i) F(1) ],
//   Q = dx sum_i w'_i [ (J*w)_i - w_i - f(w_i) ]^2,
// with trapezoid weights w' and Heaviside H (H(0) = 1).
LyapunovValues lyapunov(const Field& u, double t, const DiscreteKernel& k,
                        const Nonlinearity& nl, const CutoffProfile& eta);

// Evaluates E, E1, V, Q at the trajectory's recorded snapshots (restricted to
// `schedule` when nonempty), forms P = V' - Q by centered differences of the
// V samples, and copies the per-step dissipation series.
EnergyReport monitor(const Trajectory& traj, const DiscreteKernel& k, const Nonlinearity& nl,
                     const CutoffProfile& eta, const std::vector<long>& schedule = {});

} // namespace nrd
