#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrd/validation.hpp"

namespace nrd {

enum class ReactionFamily { cubic, table };

struct ReactionEval {
    double f = 0.0;       // f(s)
    double f_prime = 0.0; // f'(s)
    double F = 0.0;       // antiderivative int_0^s f
};

// Bistable reaction term, entering the equation as u_t = J*u - u - f(u).
// Cubic family: f(s) = s(s - alpha)(s - 1) = s^3 - (1+alpha)s^2 + alpha s.
// Tabulated family: monotone-preserving cubic interpolant (Fritsch-Carlson)
// of (s, f(s)) samples; F accumulated by the trapezoid rule on the table.
class Nonlinearity {
public:
    static Nonlinearity cubic(double alpha);
    static Nonlinearity tabulated(std::vector<std::pair<double, double>> samples);

    ReactionFamily family() const { return family_; }
    double alpha() const { return alpha_; }

    double f(double s) const;
    double f_prime(double s) const;
    double F(double s) const;
    ReactionEval evaluate(double s) const;

    // max_{[0,1]} |f'| and inf_{[0,1]} (1 + f'): analytic critical points for
    // the cubic, dense sampling for tables.
    double max_abs_f_prime() const { return max_abs_fp_; }
    double min_one_plus_f_prime() const { return min_one_plus_fp_; }

private:
    Nonlinearity() = default;
    void cache_constants();

    ReactionFamily family_ = ReactionFamily::cubic;
    double alpha_ = 0.4;
    double max_abs_fp_ = 0.0;
    double min_one_plus_fp_ = 0.0;

    // table representation
    std::vector<double> ts_, fs_, slopes_, Fs_;
    double table_f(double s) const;
    double table_fp(double s) const;
    double table_F(double s) const;

    friend double compute_beta(const Nonlinearity&);
    friend ValidationReport validate_hypotheses(const Nonlinearity&);
};

// The unique beta in (alpha, 1] with F(beta) = 0, assuming (H3) F(1) < 0.
// Closed form (2 + 2a - sqrt(2(2a-1)(a-2)))/3 for the cubic; bracketed
// root-find on F to 1e-12 for tables. F(1) = 0 is the balanced boundary case
// and returns beta = 1 (flagged by validate_hypotheses); F(1) > 0 throws.
double compute_beta(const Nonlinearity& nl);

// Checks the (H2) sign pattern on (0,alpha) and (alpha,1), f'(0) > 0,
// f'(1) > 0, monotonicity 1 + f' > 0 on (0,1), and (H3) F(1) < 0; records
// the computed constants alpha, beta, M_f, L_0 as measured values.
ValidationReport validate_hypotheses(const Nonlinearity& nl);

} // namespace nrd
