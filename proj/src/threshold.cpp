#include "nrd/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nrd/errors.hpp"

namespace nrd {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::extinction: return "extinction";
    case Verdict::propagation: return "propagation";
    case Verdict::undecided: return "undecided";
    }
    return "?";
}

Classification classify(const std::vector<double>& trace, double dt, double beta,
                        const ClassifyParams& params) {
    const long n = static_cast<long>(trace.size());
    long window = params.window > 0 ? params.window : std::max<long>(5, (n - 1) / 8);
    window = std::min(window, n);

    // mean and least-squares slope over the final window
    double mean = 0.0;
    for (long k = n - window; k < n; ++k) mean += trace[static_cast<std::size_t>(k)];
    mean /= static_cast<double>(window);

    double slope = 0.0;
    if (window >= 2) {
        const double tmid = 0.5 * static_cast<double>(window - 1) * dt;
        double num = 0.0, den = 0.0;
        for (long j = 0; j < window; ++j) {
            const double t = static_cast<double>(j) * dt - tmid;
            num += t * (trace[static_cast<std::size_t>(n - window + j)] - mean);
            den += t * t;
        }
        slope = num / den;
    }

    Classification c;
    c.terminal_center = mean;
    c.trend = slope;
    c.distance_to_beta = mean - beta;
    if (mean < beta - params.delta_cls && slope <= params.delta_slope)
        c.verdict = Verdict::extinction;
    else if (mean > beta + params.delta_cls && slope >= -params.delta_slope)
        c.verdict = Verdict::propagation;
    else
        c.verdict = Verdict::undecided;
    return c;
}

Classification classify(const Trajectory& traj, double beta, const ClassifyParams& params) {
    return classify(traj.center, traj.dt, beta, params);
}

namespace {

struct ProbeOutcome {
    Classification cls;
    bool doubled = false;
};

ProbeOutcome probe(const Grid& grid, const DiscreteKernel& k, const Nonlinearity& nl,
                   double L, double beta, const BisectOptions& opts) {
    EvolveOptions eo;
    eo.dt = opts.dt;
    eo.steps = opts.steps;
    eo.schedule = SnapshotSchedule::none();

    Field u0 = initial_indicator(grid, L);
    Trajectory traj = run(u0, k, nl, eo);
    Classification cls = classify(traj, beta, opts.classify_params);

    // a window still in motion may misrepresent the limit: rerun once with
    // a doubled horizon before classifying
    if (std::abs(cls.trend) > opts.horizon_factor * opts.classify_params.delta_slope) {
        eo.steps = 2 * opts.steps;
        traj = run(u0, k, nl, eo);
        return {classify(traj, beta, opts.classify_params), true};
    }
    return {cls, false};
}

} // namespace

ThresholdResult bisect(const Grid& grid, const DiscreteKernel& k, const Nonlinearity& nl,
                       double l_lo, double l_hi, const BisectOptions& opts) {
    if (!(l_lo > 0.0 && l_hi > l_lo))
        throw bracket_error("need 0 < l_lo < l_hi");

    const double beta = compute_beta(nl);

    ThresholdResult res;
    {
        std::ostringstream os;
        os << "X=" << grid.half_width << " M=" << grid.intervals << " dt=" << opts.dt
           << " N=" << opts.steps << " forward-euler trapezoid-quadrature";
        res.provenance = os.str();
    }

    long iteration = 0;
    auto log_probe = [&](double L, const ProbeOutcome& out, Verdict resolved, bool provisional) {
        res.log.push_back({iteration++, L, resolved, out.cls.terminal_center, provisional,
                           out.doubled});
    };

    // verify the initial bracket before iterating
    ProbeOutcome lo_out = probe(grid, k, nl, l_lo, beta, opts);
    if (lo_out.cls.verdict != Verdict::extinction)
        throw bracket_error("l_lo = " + std::to_string(l_lo) + " did not classify extinction (" +
                            to_string(lo_out.cls.verdict) + ")");
    log_probe(l_lo, lo_out, Verdict::extinction, false);

    ProbeOutcome hi_out = probe(grid, k, nl, l_hi, beta, opts);
    if (hi_out.cls.verdict != Verdict::propagation)
        throw bracket_error("l_hi = " + std::to_string(l_hi) + " did not classify propagation (" +
                            to_string(hi_out.cls.verdict) + ")");
    log_probe(l_hi, hi_out, Verdict::propagation, false);

    res.l_lo = l_lo;
    res.l_hi = l_hi;

    long midpoint_probes = 0;
    while (res.width() > opts.tol_L && midpoint_probes < opts.max_iter) {
        ++midpoint_probes;
        const double mid = res.midpoint();
        ProbeOutcome out = probe(grid, k, nl, mid, beta, opts);
        Verdict v = out.cls.verdict;
        bool provisional = false;
        if (v == Verdict::undecided) {
            // tie-break toward the side of beta the terminal center lies on;
            // keeps the bracket contracting, logged as provisional
            v = out.cls.terminal_center < beta ? Verdict::extinction : Verdict::propagation;
            provisional = true;
        }
        log_probe(mid, out, v, provisional);
        if (v == Verdict::extinction)
            res.l_lo = mid;
        else
            res.l_hi = mid;
    }

    res.converged = res.width() <= opts.tol_L;
    return res;
}

LimitProfile extract_limit_profile(const Trajectory& traj, const DiscreteKernel& k,
                                   const Nonlinearity& nl) {
    LimitProfile lp;
    lp.profile = traj.final_field();

    const Field conv = convolve_fast(k, lp.profile);
    const long M = lp.profile.grid.intervals;
    const long skirt = M / 20; // stationary residual over the interior 90%
    double r = 0.0;
    for (long i = skirt; i <= M - skirt; ++i)
        r = std::max(r, std::abs(conv[i] - lp.profile[i] - nl.f(lp.profile[i])));
    lp.residual = r;
    return lp;
}

} // namespace nrd
