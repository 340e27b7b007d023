#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nrd/errors.hpp"
#include "nrd/evolve.hpp"
#include "oracles.hpp"

using namespace nrd;

namespace {

DiscreteKernel toy_kernel(double dx, long half_range, std::vector<double> samples) {
    DiscreteKernel k;
    k.dx = dx;
    k.half_range = half_range;
    k.samples = std::move(samples);
    k.refresh_moments();
    return k;
}

EvolveOptions quick(double dt, long steps) {
    EvolveOptions eo;
    eo.dt = dt;
    eo.steps = steps;
    eo.schedule = SnapshotSchedule::none();
    return eo;
}

} // namespace

TEST_CASE("indicator initial data") {
    SUBCASE("paper grid carries exactly 643 ones at L = 1.605") {
        const Grid grid(120.0, 48000);
        const Field u = initial_indicator(grid, 1.605);
        long ones = 0;
        for (long i = 0; i <= grid.intervals; ++i)
            if (u[i] == 1.0) ++ones;
        CHECK(ones == 643);
        CHECK(check_symmetry(u) == 0.0);
        CHECK(check_radial_monotonicity(u) == 0.0);
    }

    SUBCASE("half-spacing width lights only the origin") {
        const Grid grid(10.0, 200);
        const Field u = initial_indicator(grid, 0.5 * grid.dx());
        for (long i = 0; i <= grid.intervals; ++i)
            CHECK(u[i] == (i == grid.center_index() ? 1.0 : 0.0));
    }

    SUBCASE("width reaching the boundary is refused") {
        const Grid grid(10.0, 200);
        CHECK_THROWS_AS(initial_indicator(grid, 10.0), domain_error);
        CHECK_THROWS_AS(initial_indicator(grid, 12.0), domain_error);
    }
}

TEST_CASE("single step") {
    const Nonlinearity nl = Nonlinearity::cubic(0.4);

    SUBCASE("zero field stays exactly zero") {
        const Grid grid(5.0, 100);
        const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
        const Field z(grid, 0.0);
        const Field next = step(z, k, nl, 0.5);
        for (long i = 0; i <= grid.intervals; ++i) CHECK(next[i] == 0.0);
    }

    SUBCASE("3-node toy grid reproduces the hand-computed update") {
        const Grid grid(1.0, 2); // nodes -1, 0, 1
        const DiscreteKernel k = toy_kernel(1.0, 2, {0.0, 0.25, 0.5, 0.25, 0.0});
        Field u(grid, 0.0);
        u[1] = 1.0;
        const Field next = step(u, k, nl, 0.5);
        // (J*u)_center = dx * J(0) * 1 = 0.5; f(1) = 0;
        // u' = 1 + 0.5 * (0.5 - 1 - 0) = 0.75
        CHECK(next[1] == doctest::Approx(0.75).epsilon(1e-14));
    }

    SUBCASE("constant-one field keeps its center up to the mass defect") {
        const Grid grid(120.0, 4800);
        const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
        const Field ones(grid, 1.0);
        const Field next = step(ones, k, nl, 0.5);
        CHECK(next.center() >= 1.0 - 0.5 * 1e-6);
        CHECK(next.center() <= 1.0 + 0.5 * 1e-6);
    }

    SUBCASE("oversized time step is refused, not clamped") {
        const Grid grid(5.0, 100);
        const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
        const Field u(grid, 0.5);
        // M_f = 0.6 at alpha = 0.4, so the restriction is 1/1.6 = 0.625
        CHECK_THROWS_AS(step(u, k, nl, 0.63), step_size_error);
        CHECK_NOTHROW(step(u, k, nl, 0.625));
    }
}

TEST_CASE("run basics") {
    const Grid grid(30.0, 3000);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);

    SUBCASE("zero steps returns only the initial field") {
        const Field u0 = initial_indicator(grid, 1.0);
        const Trajectory traj = run(u0, k, nl, quick(0.5, 0));
        CHECK(traj.center.size() == 1);
        CHECK(traj.snapshots.size() == 1);
        CHECK(traj.final_field().values == u0.values);
    }

    SUBCASE("structural diagnostics along a small run") {
        const Field u0 = initial_indicator(grid, 1.0);
        EvolveOptions eo = quick(0.5, 100);
        eo.schedule = SnapshotSchedule::dyadic();
        const Trajectory traj = run(u0, k, nl, eo);

        for (long kk = 0; kk <= traj.steps; ++kk) {
            CHECK(traj.sym_defect[static_cast<std::size_t>(kk)] <= 1e-12);
            CHECK(traj.mono_defect[static_cast<std::size_t>(kk)] <= 1e-10);
        }
        CHECK(traj.range_low >= -1e-12);
        CHECK(traj.range_high <= 1.0 + 1e-12);
        CHECK_FALSE(traj.domain_flagged);
        for (const Field& snap : traj.snapshots) {
            CHECK(check_symmetry(snap) <= 1e-12);
            CHECK(check_radial_monotonicity(snap) <= 1e-10);
        }
    }

    SUBCASE("non-finite input aborts with the offending step") {
        Field u0 = initial_indicator(grid, 1.0);
        u0[7] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(run(u0, k, nl, quick(0.5, 3)), numeric_error);
    }
}

TEST_CASE("symmetry and monotonicity checks respond to injected defects") {
    const Grid grid(10.0, 400);
    Field u = initial_indicator(grid, 2.0);
    u[120] += 1e-3; // off-center bump
    CHECK(check_symmetry(u) >= 1e-3);
    // a bump above its inward neighbor on the right half
    Field v(grid, 0.0);
    for (long i = 0; i <= grid.intervals; ++i)
        v[i] = std::exp(-std::abs(grid.node(i)));
    v[grid.center_index() + 100] = 0.9;
    CHECK(check_radial_monotonicity(v) > 0.0);
}

TEST_CASE("center trace shape classification") {
    SUBCASE("constant trace never rises") {
        const std::vector<double> trace(50, 0.5);
        const TraceShape s = center_trace_shape(trace, 0.5);
        CHECK(std::isinf(s.t_star));
        CHECK(s.violations == 0);
    }

    SUBCASE("synthetic dip then rise has a finite switch and no violations") {
        std::vector<double> trace;
        for (int i = 0; i < 30; ++i) trace.push_back(1.0 - 0.01 * i);
        for (int i = 0; i < 30; ++i) trace.push_back(trace.back() + 0.02);
        const TraceShape s = center_trace_shape(trace, 0.5);
        CHECK(s.t_star == doctest::Approx(14.5).epsilon(1e-12));
        CHECK(s.violations == 0);
    }

    SUBCASE("a decrease after the switch counts as a violation") {
        std::vector<double> trace{1.0, 0.9, 0.8, 0.85, 0.9, 0.83, 0.95};
        const TraceShape s = center_trace_shape(trace, 1.0);
        CHECK(std::isfinite(s.t_star));
        CHECK(s.violations == 1);
    }
}

TEST_CASE("modulus bound") {
    const Grid grid(30.0, 3000);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);
    const ModulusBound mb = modulus_bound(nl, k);

    // total variation of a unimodal even kernel = 2 J(0)
    CHECK(mb.l1 == doctest::Approx(2.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-9));
    CHECK(mb.bound == doctest::Approx(2.0 + 0.7978845608 / 0.7466666667).epsilon(1e-6));

    // sampled pairs |y - x| = 0.1 along a run stay under bound * 0.1
    const Field u0 = initial_indicator(grid, 1.61);
    EvolveOptions eo = quick(0.5, 100);
    eo.schedule = SnapshotSchedule::all();
    const Trajectory traj = run(u0, k, nl, eo);
    const long stride = std::lround(0.1 / grid.dx());
    for (const Field& snap : traj.snapshots) {
        for (long i = 0; i + stride <= grid.intervals; i += 37)
            CHECK(std::abs(snap[i + stride] - snap[i]) <= mb.bound * 0.1 + 1e-12);
    }
}

TEST_CASE("discrete comparison principle at the critical step size") {
    const Grid grid(8.0, 512);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);
    const double dt = 1.0 / (1.0 + nl.max_abs_f_prime());

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int pair = 0; pair < 10; ++pair) {
        Field lo(grid), hi(grid);
        lo.values = oracle::random_field(rng, grid.size());
        hi.values = lo.values;
        for (auto& v : hi.values) v += unit(rng) * (1.0 - v);
        Trajectory tlo = run(lo, k, nl, quick(dt, 50));
        Trajectory thi = run(hi, k, nl, quick(dt, 50));
        // orderings hold at the recorded final fields and center traces
        for (long i = 0; i <= grid.intervals; ++i)
            CHECK(tlo.final_field()[i] <= thi.final_field()[i] + 1e-12);
        for (std::size_t s = 0; s < tlo.center.size(); ++s)
            CHECK(tlo.center[s] <= thi.center[s] + 1e-12);
    }
}

TEST_CASE("translation covariance is bit-exact on the direct path") {
    const Grid grid(8.0, 512);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);

    Field u0(grid, 0.0);
    for (long i = 0; i <= grid.intervals; ++i) {
        const double x = grid.node(i);
        u0[i] = std::abs(x + 2.0) <= 1.0 ? 0.8 : 0.0; // supported well inside
    }
    const long shift = 40;
    Field shifted(grid, 0.0);
    for (long i = shift; i <= grid.intervals; ++i) shifted[i] = u0[i - shift];

    EvolveOptions eo = quick(0.5, 10);
    eo.path = ConvPath::direct;
    const Trajectory a = run(u0, k, nl, eo);
    const Trajectory b = run(shifted, k, nl, eo);
    const Field& ua = a.final_field();
    const Field& ub = b.final_field();
    for (long i = shift; i <= grid.intervals; ++i) {
        if (std::abs(grid.node(i)) <= 6.0) // away from the boundary clipping
            CHECK(ub[i] == ua[i - shift]);
    }
}

TEST_CASE("center traces are ordered in L") {
    const Grid grid(30.0, 3000);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);
    const Trajectory t08 = run(initial_indicator(grid, 0.8), k, nl, quick(0.5, 100));
    const Trajectory t10 = run(initial_indicator(grid, 1.0), k, nl, quick(0.5, 100));
    for (std::size_t s = 0; s < t08.center.size(); ++s)
        CHECK(t10.center[s] >= t08.center[s] - 1e-12);
}

TEST_CASE("boundary contamination is flagged when the front reaches the edge") {
    const Grid grid(8.0, 800);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);
    const Field u0 = initial_indicator(grid, 4.0); // propagates; domain too small
    const Trajectory traj = run(u0, k, nl, quick(0.5, 200));
    CHECK(traj.domain_flagged);
    CHECK(traj.boundary_peak > 1e-3);
}

TEST_CASE("snapshot schedules") {
    const std::vector<long> dyadic = SnapshotSchedule::dyadic().resolve(400);
    CHECK(dyadic.front() == 0);
    CHECK(dyadic.back() == 400);
    CHECK(std::find(dyadic.begin(), dyadic.end(), 200) != dyadic.end());
    CHECK(std::find(dyadic.begin(), dyadic.end(), 100) != dyadic.end());

    const std::vector<long> none = SnapshotSchedule::none().resolve(400);
    CHECK(none == std::vector<long>{400}); // final state always kept

    const std::vector<long> all = SnapshotSchedule::all().resolve(10);
    CHECK(all.size() == 11);
}
