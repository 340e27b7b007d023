#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nrd/grid.hpp"
#include "nrd/kernel.hpp"
#include "nrd/reaction.hpp"

namespace nrd {

struct FrontOptions {
    double tol = 1e-9;      // ||residual||_inf convergence threshold
    long max_iter = 50;
    long max_halvings = 30; // damping: step halving on residual increase
};

// Traveling front (U, c) of c U' + J*U - U - f(U) = 0 on a moving-frame grid
// with U(-l) = 0, U(l) = 1 clamped and phase condition U(0) = alpha.
struct FrontSolution {
    Grid grid;                 // half-width l, spacing dxi
    std::vector<double> profile;
    double speed = 0.0;
    double residual_norm = 0.0;
    double phase_value = 0.0;  // U(0)
    bool monotone = true;      // U_{j+1} >= U_j - 1e-8 everywhere
    long iterations = 0;
    std::vector<double> residual_history;
    std::vector<double> residual; // per-node residual of the front equation
};

// Damped Newton on the augmented system (interior profile equations + phase
// condition), unknowns (U_1..U_{m-1}, c). The convolution beyond the domain
// uses the clamped tails: zero on the left, one on the right, the latter
// entering through suffix sums of the kernel samples. U' is discretized by
// central differences. Initial guess: logistic ramp through (0, alpha).
// Throws solver_error (with residual history) on non-convergence.
FrontSolution front_solve(const DiscreteKernel& k, const Nonlinearity& nl,
                          double half_width, double dxi,
                          const std::optional<std::vector<double>>& init = std::nullopt,
                          const FrontOptions& opts = {});

// |c * sum (U')^2 dxi - int_0^1 f|, the discrete defect of the speed
// identity; small values certify the computed (U, c) pair.
double speed_identity_residual(const FrontSolution& fs, const Nonlinearity& nl);

// Exponential rates of the front tails from the dispersion relation
// c lambda + J^(lambda) - 1 - f'(state) = 0: lambda1 < 0 linearizing at the
// state 1, lambda2 > 0 at the state 0. Bracketed root-find to 1e-10.
std::pair<double, double> char_roots(const KernelSpec& spec, const Nonlinearity& nl, double c);

// Least-squares slopes of log(1-U) over [l/4, l/2] and log(U) over
// [-l/2, -l/4]. Throws window_error when the tail contrast in a fit window
// falls below 1e-14.
std::pair<double, double> measure_tail_rates(const FrontSolution& fs);

} // namespace nrd
