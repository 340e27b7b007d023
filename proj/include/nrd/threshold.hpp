#pragma once

#include <string>
#include <vector>

#include "nrd/evolve.hpp"

namespace nrd {

enum class Verdict { extinction, propagation, undecided };

std::string to_string(Verdict v);

struct ClassifyParams {
    double delta_cls = 0.02;    // dead zone around beta
    double delta_slope = 1e-6;  // per unit time
    long window = 0;            // 0: max(5, N/8)
};

// Finite-horizon surrogate of the limit criterion lim u(t,0) vs beta:
// mean and least-squares slope of the center trace over the final window.
struct Classification {
    Verdict verdict = Verdict::undecided;
    double terminal_center = 0.0; // window mean
    double trend = 0.0;           // window slope, per unit time
    double distance_to_beta = 0.0;
};

Classification classify(const std::vector<double>& trace, double dt, double beta,
                        const ClassifyParams& params = {});
Classification classify(const Trajectory& traj, double beta,
                        const ClassifyParams& params = {});

struct ThresholdIteration {
    long iteration = 0;
    double L = 0.0;
    Verdict verdict = Verdict::undecided;
    double terminal_center = 0.0;
    bool provisional = false;     // undecided probe resolved by the tie-break
    bool horizon_doubled = false;
};

struct ThresholdResult {
    double l_lo = 0.0; // every logged l_lo classified extinction
    double l_hi = 0.0; // every logged l_hi classified propagation
    std::vector<ThresholdIteration> log;
    bool converged = false; // bracket width <= tol within the budget
    std::string provenance;

    double width() const { return l_hi - l_lo; }
    double midpoint() const { return 0.5 * (l_lo + l_hi); }
};

struct BisectOptions {
    double dt = 0.5;
    long steps = 400;
    double tol_L = 0.005;
    long max_iter = 40;
    ClassifyParams classify_params = {};
    // A probe whose window slope magnitude exceeds horizon_factor*delta_slope
    // is rerun once with doubled horizon before classification.
    double horizon_factor = 10.0;
};

// Bisection for the sharp threshold L*. Verifies the initial bracket
// (extinction at l_lo, propagation at l_hi; bracket_error otherwise), then
// contracts until width <= tol_L or max_iter probes. Undecided probes are
// resolved toward the side of beta their terminal center lies on and logged
// as provisional.
ThresholdResult bisect(const Grid& grid, const DiscreteKernel& k, const Nonlinearity& nl,
                       double l_lo, double l_hi, const BisectOptions& opts);

struct LimitProfile {
    Field profile;
    double residual = 0.0; // ||J*u - u - f(u)||_inf over the interior 90%
};

// Final snapshot together with its stationary residual; for near-threshold
// runs this is the numerical candidate for the limit wave u_inf.
LimitProfile extract_limit_profile(const Trajectory& traj, const DiscreteKernel& k,
                                   const Nonlinearity& nl);

} // namespace nrd
