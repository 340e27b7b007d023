#include "nrd/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrd/errors.hpp"

namespace nrd {

namespace {

constexpr double kBalancedTol = 1e-14; // |F(1)| below this is the boundary case

double bisect_zero(const auto& g, double lo, double hi, double tol) {
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo * ghi > 0.0) throw root_not_found_error("no sign change in bracket");
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (glo * gm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

Nonlinearity Nonlinearity::cubic(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw invalid_spec_error("cubic nonlinearity needs alpha in (0,1)");
    Nonlinearity nl;
    nl.family_ = ReactionFamily::cubic;
    nl.alpha_ = alpha;
    nl.cache_constants();
    return nl;
}

Nonlinearity Nonlinearity::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 4) throw invalid_spec_error("tabulated nonlinearity needs >= 4 samples");
    std::sort(samples.begin(), samples.end());
    Nonlinearity nl;
    nl.family_ = ReactionFamily::table;
    const std::size_t n = samples.size();
    nl.ts_.resize(n);
    nl.fs_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        nl.ts_[i] = samples[i].first;
        nl.fs_[i] = samples[i].second;
        if (!std::isfinite(nl.ts_[i]) || !std::isfinite(nl.fs_[i]))
            throw invalid_spec_error("tabulated nonlinearity has non-finite entries");
    }
    if (nl.ts_.front() > 0.0 || nl.ts_.back() < 1.0)
        throw invalid_spec_error("tabulated nonlinearity must cover [0,1]");

    // Fritsch-Carlson slopes: monotone-preserving cubic Hermite interpolant
    nl.slopes_.resize(n);
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = nl.ts_[i + 1] - nl.ts_[i];
        if (!(h[i] > 0.0)) throw invalid_spec_error("tabulated nonlinearity has duplicate s values");
        d[i] = (nl.fs_[i + 1] - nl.fs_[i]) / h[i];
    }
    nl.slopes_[0] = d[0];
    nl.slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            nl.slopes_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            nl.slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }

    // antiderivative by trapezoid on the table grid, shifted so F(0) = 0
    nl.Fs_.resize(n);
    nl.Fs_[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        nl.Fs_[i] = nl.Fs_[i - 1] + 0.5 * h[i - 1] * (nl.fs_[i - 1] + nl.fs_[i]);
    const double F0 = nl.table_F(0.0);
    for (double& v : nl.Fs_) v -= F0;

    // interior zero: the down-crossing of f in (0,1)
    nl.alpha_ = std::numeric_limits<double>::quiet_NaN();
    const long probes = 4096;
    double prev_s = 1e-8, prev_f = nl.table_f(prev_s);
    for (long i = 1; i <= probes; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(probes) * (1.0 - 2e-8) + 1e-8;
        const double fv = nl.table_f(s);
        if (prev_f > 0.0 && fv <= 0.0) {
            nl.alpha_ = bisect_zero([&](double q) { return nl.table_f(q); }, prev_s, s, 1e-14);
            break;
        }
        prev_s = s;
        prev_f = fv;
    }
    nl.cache_constants();
    return nl;
}

void Nonlinearity::cache_constants() {
    double max_abs = 0.0;
    double min_fp = std::numeric_limits<double>::infinity();
    const long n = 10000;
    for (long i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        const double fp = f_prime(s);
        max_abs = std::max(max_abs, std::abs(fp));
        min_fp = std::min(min_fp, fp);
    }
    if (family_ == ReactionFamily::cubic) {
        // f' = 3s^2 - 2(1+a)s + a is a parabola; its vertex (1+a)/3 is in [0,1]
        const double sv = (1.0 + alpha_) / 3.0;
        const double fpv = 3.0 * sv * sv - 2.0 * (1.0 + alpha_) * sv + alpha_;
        max_abs = std::max({std::abs(fpv), alpha_, 1.0 - alpha_});
        min_fp = std::min({fpv, alpha_, 1.0 - alpha_});
    }
    max_abs_fp_ = max_abs;
    min_one_plus_fp_ = 1.0 + min_fp;
}

double Nonlinearity::table_f(double s) const {
    const auto& t = ts_;
    if (s <= t.front()) return fs_.front() + slopes_.front() * (s - t.front());
    if (s >= t.back()) return fs_.back() + slopes_.back() * (s - t.back());
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double x = (s - t[i]) / h;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
    const double h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x);
    const double h11 = x * x * (x - 1);
    return h00 * fs_[i] + h10 * h * slopes_[i] + h01 * fs_[i + 1] + h11 * h * slopes_[i + 1];
}

double Nonlinearity::table_fp(double s) const {
    const auto& t = ts_;
    if (s <= t.front()) return slopes_.front();
    if (s >= t.back()) return slopes_.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double x = (s - t[i]) / h;
    const double g00 = 6 * x * x - 6 * x;
    const double g10 = 3 * x * x - 4 * x + 1;
    const double g01 = -6 * x * x + 6 * x;
    const double g11 = 3 * x * x - 2 * x;
    return (g00 * fs_[i] + g01 * fs_[i + 1]) / h + g10 * slopes_[i] + g11 * slopes_[i + 1];
}

double Nonlinearity::table_F(double s) const {
    const auto& t = ts_;
    if (s <= t.front()) return Fs_.front() + fs_.front() * (s - t.front());
    if (s >= t.back()) return Fs_.back() + fs_.back() * (s - t.back());
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    return Fs_[i] + 0.5 * (s - t[i]) * (fs_[i] + table_f(s));
}

double Nonlinearity::f(double s) const {
    if (family_ == ReactionFamily::cubic)
        return s * s * s - (1.0 + alpha_) * s * s + alpha_ * s;
    return table_f(s);
}

double Nonlinearity::f_prime(double s) const {
    if (family_ == ReactionFamily::cubic)
        return 3.0 * s * s - 2.0 * (1.0 + alpha_) * s + alpha_;
    return table_fp(s);
}

double Nonlinearity::F(double s) const {
    if (family_ == ReactionFamily::cubic)
        return 0.25 * s * s * s * s - (1.0 + alpha_) * s * s * s / 3.0 + 0.5 * alpha_ * s * s;
    return table_F(s);
}

ReactionEval Nonlinearity::evaluate(double s) const {
    return {f(s), f_prime(s), F(s)};
}

double compute_beta(const Nonlinearity& nl) {
    const double F1 = nl.F(1.0);
    if (F1 > kBalancedTol)
        throw hypothesis_error("(H3) fails: int_0^1 f = " + std::to_string(F1) + " >= 0");
    if (std::abs(F1) <= kBalancedTol) return 1.0; // balanced boundary case

    if (nl.family_ == ReactionFamily::cubic) {
        const double a = nl.alpha_;
        const double radicand = 2.0 * (2.0 * a - 1.0) * (a - 2.0);
        return (-std::sqrt(radicand) + 2.0 * a + 2.0) / 3.0;
    }
    if (std::isnan(nl.alpha_))
        throw root_not_found_error("tabulated f has no interior zero to bracket beta");
    const double Fa = nl.F(nl.alpha_);
    if (Fa <= 0.0 || F1 >= 0.0)
        throw root_not_found_error("F has no sign change on (alpha, 1]");
    return bisect_zero([&](double s) { return nl.F(s); }, nl.alpha_, 1.0, 1e-12);
}

ValidationReport validate_hypotheses(const Nonlinearity& nl) {
    ValidationReport rep;
    rep.subject = "nonlinearity";

    const double f0 = nl.f(0.0), f1 = nl.f(1.0);
    rep.checks.push_back({"f_zero_at_0", std::abs(f0) <= 1e-12, f0, "f(0)"});
    rep.checks.push_back({"f_zero_at_1", std::abs(f1) <= 1e-12, f1, "f(1)"});

    const double a = nl.alpha_;
    bool pattern = std::isfinite(a) && a > 0.0 && a < 1.0;
    if (pattern) {
        const long n = 2000;
        for (long i = 1; i < n && pattern; ++i) {
            const double s = a * static_cast<double>(i) / static_cast<double>(n);
            if (s > 1e-9 && a - s > 1e-9) pattern = nl.f(s) > 0.0;
        }
        for (long i = 1; i < n && pattern; ++i) {
            const double s = a + (1.0 - a) * static_cast<double>(i) / static_cast<double>(n);
            if (s - a > 1e-9 && 1.0 - s > 1e-9) pattern = nl.f(s) < 0.0;
        }
    }
    rep.checks.push_back({"sign_pattern", pattern, a,
                          "f > 0 on (0,alpha), f < 0 on (alpha,1); measured = alpha"});

    const double fp0 = nl.f_prime(0.0), fp1 = nl.f_prime(1.0);
    rep.checks.push_back({"fp_positive_at_0", fp0 > 0.0, fp0, "f'(0)"});
    rep.checks.push_back({"fp_positive_at_1", fp1 > 0.0, fp1, "f'(1)"});

    const double l0 = nl.min_one_plus_f_prime();
    rep.checks.push_back({"monotonicity_L0", l0 > 0.0, l0, "inf (1 + f')"});
    rep.checks.push_back({"max_slope_Mf", std::isfinite(nl.max_abs_f_prime()),
                          nl.max_abs_f_prime(), "max |f'|"});

    const double F1 = nl.F(1.0);
    const bool h3 = F1 < -kBalancedTol;
    const bool balanced = std::abs(F1) <= kBalancedTol;
    rep.checks.push_back({"H3_F1_negative", h3, F1,
                          balanced ? "boundary case F(1) = 0 (beta = 1)" : "int_0^1 f"});
    if (h3 || balanced) {
        const double beta = compute_beta(nl);
        rep.checks.push_back({"beta", beta > a && beta <= 1.0, beta, "F(beta) = 0"});
    }
    return rep;
}

} // namespace nrd
