#include "nrd/energy.hpp"

#include <algorithm>
#include <cmath>

#include "nrd/errors.hpp"

namespace nrd {

double CutoffProfile::value(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    // quintic smoothstep complement: C^2 across the junctions
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

CutoffProfile CutoffProfile::on_grid(const Grid& grid) {
    CutoffProfile eta;
    eta.grid = grid;
    eta.samples.resize(static_cast<std::size_t>(grid.size()));
    for (long i = 0; i < grid.size(); ++i)
        eta.samples[static_cast<std::size_t>(i)] = value(grid.node(i));
    return eta;
}

EnergyEvaluator::EnergyEvaluator(const Grid& grid, const DiscreteKernel& k, const Nonlinearity& nl)
    : kernel_(k), nl_(nl), conv_(k, grid), scratch_(grid) {
    Field ones(grid, 1.0);
    local_mass_ = conv_.apply(ones);
}

EnergyValues EnergyEvaluator::energy(const Field& u) {
    conv_.apply(u, scratch_);
    const long M = u.grid.intervals;
    const double dx = u.grid.dx();
    double e1 = 0.0, pot = 0.0;
    for (long i = 0; i <= M; ++i) {
        const double w = (i == 0 || i == M) ? 0.5 : 1.0;
        e1 += w * u[i] * (local_mass_[i] * u[i] - scratch_[i]);
        pot += w * nl_.F(u[i]);
    }
    e1 *= 0.5 * dx;
    return {e1 + dx * pot, e1};
}

LyapunovValues EnergyEvaluator::lyapunov(const Field& u, double t, const CutoffProfile& eta) {
    const Field w = truncate_left(u, t, eta);
    conv_.apply(w, scratch_);
    const long M = u.grid.intervals;
    const double dx = u.grid.dx();
    const double F1 = nl_.F(1.0);
    double V = 0.0, Q = 0.0;
    for (long i = 0; i <= M; ++i) {
        const double wt = (i == 0 || i == M) ? 0.5 : 1.0;
        const double jw = scratch_[i];
        const double wi = w[i];
        const double heaviside = u.grid.node(i) >= 0.0 ? 1.0 : 0.0;
        V += wt * (0.5 * (jw - wi) * wi - nl_.F(wi) + heaviside * F1);
        const double r = jw - wi - nl_.f(wi);
        Q += wt * r * r;
    }
    return {dx * V, dx * Q};
}

EnergyValues energy(const Field& u, const DiscreteKernel& k, const Nonlinearity& nl) {
    EnergyEvaluator ev(u.grid, k, nl);
    return ev.energy(u);
}

Field truncate_left(const Field& u, double t, const CutoffProfile& eta) {
    require_same_grid(u.grid, eta.grid, "truncate_left");
    if (t + 1.0 >= u.grid.half_width || 1.0 >= u.grid.half_width)
        throw domain_error("truncation needs x = -t-1 and x = 1 interior to the grid");
    Field w(u.grid, 0.0, u.time);
    const long M = u.grid.intervals;
    for (long i = 0; i <= M; ++i) {
        const double x = u.grid.node(i);
        if (x < 0.0)
            w[i] = CutoffProfile::value(-x - t) * u[i];
        else
            w[i] = 1.0 - eta.samples[static_cast<std::size_t>(i)] * (1.0 - u[i]);
    }
    return w;
}

LyapunovValues lyapunov(const Field& u, double t, const DiscreteKernel& k,
                        const Nonlinearity& nl, const CutoffProfile& eta) {
    EnergyEvaluator ev(u.grid, k, nl);
    return ev.lyapunov(u, t, eta);
}

EnergyReport monitor(const Trajectory& traj, const DiscreteKernel& k, const Nonlinearity& nl,
                     const CutoffProfile& eta, const std::vector<long>& schedule) {
    EnergyReport rep;
    rep.dissipation = traj.dissipation;
    if (traj.snapshots.empty()) return rep;

    EnergyEvaluator ev(traj.grid, k, nl);
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const long kstep = traj.snapshot_steps[s];
        if (!schedule.empty() &&
            std::find(schedule.begin(), schedule.end(), kstep) == schedule.end())
            continue;
        const Field& u = traj.snapshots[s];
        const double t = traj.time_at(kstep);
        const EnergyValues e = ev.energy(u);
        // the truncation wants -t-1 interior; clamp the truncation time to
        // what the grid can hold so late snapshots remain evaluable
        const double t_trunc = std::min(t, traj.grid.half_width - 1.5);
        const LyapunovValues lv = ev.lyapunov(u, t_trunc, eta);
        rep.times.push_back(t);
        rep.E.push_back(e.total);
        rep.E1.push_back(e.dirichlet);
        rep.V.push_back(lv.V);
        rep.Q.push_back(lv.Q);
    }

    // V'(t) by centered differences of the V samples (one-sided at the ends)
    const std::size_t n = rep.times.size();
    rep.P.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double vprime = 0.0;
        if (n >= 2) {
            const std::size_t a = i == 0 ? 0 : i - 1;
            const std::size_t b = i + 1 == n ? i : i + 1;
            vprime = (rep.V[b] - rep.V[a]) / (rep.times[b] - rep.times[a]);
        }
        rep.P[i] = vprime - rep.Q[i];
    }
    return rep;
}

} // namespace nrd
