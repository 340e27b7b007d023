#include "nrd/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nrd/errors.hpp"

namespace nrd {

std::vector<long> SnapshotSchedule::resolve(long num_steps) const {
    std::vector<long> out;
    switch (kind) {
    case Kind::none:
        break;
    case Kind::all:
        for (long k = 0; k <= num_steps; ++k) out.push_back(k);
        break;
    case Kind::custom:
        out = steps;
        break;
    case Kind::dyadic:
        // endpoints plus dyadic interior times T/2, T/4, ..., T/64
        out.push_back(0);
        for (long div = 2; div <= 64; div *= 2) {
            const long k = num_steps / div;
            if (k > 0) out.push_back(k);
        }
        out.push_back(num_steps);
        break;
    }
    out.push_back(num_steps); // final state always kept
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [&](long k) { return k < 0 || k > num_steps; });
    return out;
}

Field initial_indicator(const Grid& grid, double L) {
    if (!(L > 0.0)) throw invalid_spec_error("indicator half-width must be positive");
    if (L >= grid.half_width)
        throw domain_error("indicator half-width reaches the grid boundary; enlarge X");
    Field u(grid);
    const long M = grid.intervals;
    for (long i = 0; i <= M; ++i)
        u[i] = std::abs(grid.node(i)) <= L ? 1.0 : 0.0;
    return u;
}

namespace {

void check_step_size(double dt, const Nonlinearity& nl) {
    const double limit = 1.0 / (1.0 + nl.max_abs_f_prime());
    if (!(dt > 0.0)) throw step_size_error("time step must be positive");
    if (dt > limit * (1.0 + 1e-12))
        throw step_size_error("dt = " + std::to_string(dt) +
                              " exceeds the order-preservation restriction 1/(1+M_f) = " +
                              std::to_string(limit));
}

double symmetry_defect(const std::vector<double>& v) {
    double d = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        d = std::max(d, std::abs(v[i] - v[n - 1 - i]));
    return d;
}

double radial_defect(const std::vector<double>& v, long center) {
    double d = 0.0;
    const long n = static_cast<long>(v.size());
    for (long i = center; i + 1 < n; ++i)
        d = std::max(d, v[static_cast<std::size_t>(i + 1)] - v[static_cast<std::size_t>(i)]);
    for (long i = center; i > 0; --i)
        d = std::max(d, v[static_cast<std::size_t>(i - 1)] - v[static_cast<std::size_t>(i)]);
    return std::max(0.0, d);
}

} // namespace

Field step(const Field& u, const DiscreteKernel& k, const Nonlinearity& nl, double dt) {
    check_step_size(dt, nl);
    Field conv = convolve_fast(k, u);
    Field out(u.grid, 0.0, u.time + dt);
    const long n = u.size();
    for (long i = 0; i < n; ++i)
        out[i] = u[i] + dt * (conv[i] - u[i] - nl.f(u[i]));
    return out;
}

Trajectory run(const Field& u0, const DiscreteKernel& k, const Nonlinearity& nl,
               const EvolveOptions& opts) {
    check_step_size(opts.dt, nl);
    if (opts.steps < 0) throw invalid_spec_error("negative step count");

    const Grid& grid = u0.grid;
    const long M = grid.intervals;
    const long N = opts.steps;
    const long center = grid.center_index();
    const long collar = std::max<long>(1, static_cast<long>(opts.boundary_frac * static_cast<double>(M + 1)));

    Trajectory traj;
    traj.grid = grid;
    traj.dt = opts.dt;
    traj.steps = N;
    traj.center.reserve(static_cast<std::size_t>(N + 1));
    traj.dissipation.reserve(static_cast<std::size_t>(N));

    std::optional<FastConvolver> fast;
    if (opts.path == ConvPath::fast) fast.emplace(k, grid);

    const std::vector<long> snaps = opts.schedule.resolve(N);
    std::size_t next_snap = 0;

    // local mass (J*1): only needed for the per-step energy series
    Field jone;
    if (opts.record_energy) {
        Field ones(grid, 1.0);
        jone = fast ? fast->apply(ones) : convolve_direct(k, ones);
        traj.energy.reserve(static_cast<std::size_t>(N + 1));
        traj.energy_e1.reserve(static_cast<std::size_t>(N + 1));
    }

    Field u = u0;
    Field conv(grid);
    const double dx = grid.dx();
    traj.range_low = 0.0;
    traj.range_high = 1.0;

    for (long kstep = 0; kstep <= N; ++kstep) {
        u.time = traj.time_at(kstep);

        double lo = u[0], hi = u[0];
        for (long i = 0; i <= M; ++i) {
            const double v = u[i];
            if (!std::isfinite(v))
                throw numeric_error("non-finite value at step " + std::to_string(kstep) +
                                        ", node " + std::to_string(i),
                                    kstep);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        traj.range_low = std::min(traj.range_low, lo);
        traj.range_high = std::max(traj.range_high, hi);

        traj.center.push_back(u[center]);
        traj.max_u.push_back(hi);
        traj.min_u.push_back(lo);
        traj.sym_defect.push_back(symmetry_defect(u.values));
        traj.mono_defect.push_back(radial_defect(u.values, center));

        for (long i = 0; i < collar; ++i) {
            traj.boundary_peak = std::max(traj.boundary_peak, std::abs(u[i]));
            traj.boundary_peak = std::max(traj.boundary_peak, std::abs(u[M - i]));
        }

        if (next_snap < snaps.size() && snaps[next_snap] == kstep) {
            traj.snapshot_steps.push_back(kstep);
            traj.snapshots.push_back(u);
            ++next_snap;
        }

        // rhs at the current state: reused by the update, the dissipation
        // record and the energy series
        if (fast)
            fast->apply(u, conv);
        else
            conv = convolve_direct(k, u);

        if (opts.record_energy) {
            double e1 = 0.0, pot = 0.0;
            for (long i = 0; i <= M; ++i) {
                const double w = (i == 0 || i == M) ? 0.5 : 1.0;
                e1 += w * u[i] * (jone[i] * u[i] - conv[i]);
                pot += w * nl.F(u[i]);
            }
            e1 *= 0.5 * dx;
            traj.energy_e1.push_back(e1);
            traj.energy.push_back(e1 + dx * pot);
        }

        if (kstep == N) break;

        double diss = 0.0;
        for (long i = 0; i <= M; ++i) {
            const double r = conv[i] - u[i] - nl.f(u[i]);
            diss += r * r;
            u[i] += opts.dt * r;
        }
        traj.dissipation.push_back(dx * diss);
    }

    traj.domain_flagged = traj.boundary_peak > opts.boundary_tol;
    return traj;
}

double check_symmetry(const Field& u) {
    return symmetry_defect(u.values);
}

double check_radial_monotonicity(const Field& u) {
    return radial_defect(u.values, u.grid.center_index());
}

TraceShape center_trace_shape(const std::vector<double>& trace, double dt, double tol) {
    TraceShape shape;
    const long n = static_cast<long>(trace.size());
    long k_star = -1; // first rising difference
    for (long k = 0; k + 1 < n; ++k) {
        if (trace[static_cast<std::size_t>(k + 1)] - trace[static_cast<std::size_t>(k)] > tol) {
            k_star = k;
            break;
        }
    }
    if (k_star < 0) return shape; // never rises: t* = infinity, no violations
    shape.t_star = dt * static_cast<double>(k_star);
    for (long k = k_star; k + 1 < n; ++k) {
        if (trace[static_cast<std::size_t>(k + 1)] - trace[static_cast<std::size_t>(k)] < -tol)
            ++shape.violations;
    }
    return shape;
}

TraceShape center_trace_shape(const Trajectory& traj, double tol) {
    return center_trace_shape(traj.center, traj.dt, tol);
}

ModulusBound modulus_bound(const Nonlinearity& nl, const DiscreteKernel& k) {
    ModulusBound mb;
    mb.l0 = nl.min_one_plus_f_prime();
    if (mb.l0 <= 0.0)
        throw hypothesis_error("modulus bound needs 1 + f' > 0 on (0,1)");
    // int |J'| equals the total variation of J; approximated by the summed
    // absolute differences of the samples (no dx factor)
    double tv = 0.0;
    for (long p = 0; p + 1 < k.num_samples(); ++p)
        tv += std::abs(k.samples[static_cast<std::size_t>(p + 1)] -
                       k.samples[static_cast<std::size_t>(p)]);
    mb.l1 = tv;
    mb.bound = 2.0 + mb.l1 / mb.l0;
    return mb;
}

} // namespace nrd
