#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nrd/errors.hpp"
#include "nrd/kernel.hpp"
#include "oracles.hpp"

using namespace nrd;

TEST_CASE("gaussian kernel on the reference grid has unit mass") {
    const Grid grid(120.0, 48000);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);

    // high-resolution trapezoid oracle at dx/10
    const double oracle_mass = oracle::trapezoid(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); },
        -240.0, 240.0, 960000);
    CHECK(std::abs(k.mass - 1.0) < 1e-9);
    CHECK(std::abs(k.mass - oracle_mass) < 1e-9);
    // |x| has a kink at 0, so the moment is only O(dx^2)-accurate
    CHECK(k.first_abs_moment == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-4));
}

TEST_CASE("kernel samples are even bit-for-bit") {
    const Grid grid(8.0, 512);
    for (const auto& spec : {KernelSpec::gaussian(0.7), KernelSpec::bump(1.3)}) {
        const DiscreteKernel k = build_kernel(spec, grid);
        for (long m = 1; m <= k.half_range; ++m) CHECK(k.at(m) == k.at(-m));
    }
}

TEST_CASE("invalid specs are refused") {
    CHECK_THROWS_AS(KernelSpec::gaussian(0.0), invalid_spec_error);
    CHECK_THROWS_AS(KernelSpec::gaussian(-1.0), invalid_spec_error);
    CHECK_THROWS_AS(KernelSpec::bump(-0.5), invalid_spec_error);
    CHECK_THROWS_AS(KernelSpec::tabulated({{0.0, 1.0}, {1.0, -0.25}}), hypothesis_error);
}

TEST_CASE("validate_kernel reports each hypothesis") {
    const Grid grid(10.0, 1000);
    DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    CHECK(validate_kernel(k).all_passed());

    SUBCASE("doubled samples fail the mass check with measured mass near 2") {
        for (double& v : k.samples) v *= 2.0;
        k.refresh_moments();
        const ValidationReport rep = validate_kernel(k);
        CHECK_FALSE(rep.all_passed());
        const auto* mass = rep.find("unit_mass");
        REQUIRE(mass != nullptr);
        CHECK_FALSE(mass->passed);
        CHECK(mass->measured == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(rep.find("even")->passed);
    }

    SUBCASE("shifting samples by one slot breaks evenness") {
        k.samples.insert(k.samples.begin(), 0.0);
        k.samples.pop_back();
        k.refresh_moments();
        const ValidationReport rep = validate_kernel(k);
        CHECK_FALSE(rep.find("even")->passed);
    }

    SUBCASE("a negative sample fails nonnegativity") {
        k.samples[10] = -1e-8;
        const ValidationReport rep = validate_kernel(k);
        CHECK_FALSE(rep.find("nonnegative")->passed);
    }
}

TEST_CASE("direct convolution matches the defining quadrature") {
    const Grid grid(4.0, 64);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);

    SUBCASE("constant field reproduces the discrete mass at the center") {
        Field u(grid, 0.75);
        const Field v = convolve_direct(k, u);
        // center is ~4 sigma from the boundary: truncation shows up at ~1e-4,
        // mass agreement at that level only
        CHECK(v.center() == doctest::Approx(0.75 * k.mass).epsilon(1e-3));
    }

    SUBCASE("unit spike picks out one weighted kernel sample") {
        Field u(grid, 0.0);
        const long j = 20;
        u[j] = 1.0;
        const Field v = convolve_direct(k, u);
        for (long i = 0; i <= grid.intervals; ++i)
            CHECK(v[i] == doctest::Approx(grid.dx() * k.at(j - i)).epsilon(1e-14));
        u[0] = 0.0;
        u[j] = 0.0;
        u[grid.intervals] = 1.0; // endpoint spike carries the half weight
        const Field w = convolve_direct(k, u);
        CHECK(w[30] == doctest::Approx(0.5 * grid.dx() * k.at(grid.intervals - 30)).epsilon(1e-14));
    }

    SUBCASE("random field agrees with the double-loop oracle to 1e-13 relative") {
        std::mt19937_64 rng(11);
        Field u(grid);
        u.values = oracle::random_field(rng, grid.size());
        const Field v = convolve_direct(k, u);
        const auto ref = oracle::convolve_double_loop(k, u.values, grid.dx());
        for (long i = 0; i <= grid.intervals; ++i) {
            CHECK(std::abs(v[i] - ref[static_cast<std::size_t>(i)]) <=
                  1e-13 * std::max(1.0, std::abs(ref[static_cast<std::size_t>(i)])));
        }
    }
}

TEST_CASE("fast path reproduces the direct path") {
    std::mt19937_64 rng(23);
    for (long M : {64L, 512L, 2000L}) {
        const Grid grid(10.0, M);
        const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
        FastConvolver conv(k, grid);
        for (int rep = 0; rep < 20; ++rep) {
            Field u(grid);
            u.values = oracle::random_field(rng, grid.size());
            const Field fast = conv.apply(u);
            const Field direct = convolve_direct(k, u);
            double worst = 0.0;
            for (long i = 0; i <= M; ++i) worst = std::max(worst, std::abs(fast[i] - direct[i]));
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("fast path maps zero to exactly zero") {
    const Grid grid(10.0, 256);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Field z(grid, 0.0);
    const Field v = convolve_fast(k, z);
    for (long i = 0; i <= grid.intervals; ++i) CHECK(v[i] == 0.0);
}

TEST_CASE("paper-grid indicator: fast center value matches the direct row") {
    const Grid grid(120.0, 48000);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    Field u(grid, 0.0);
    for (long i = 0; i <= grid.intervals; ++i)
        u[i] = std::abs(grid.node(i)) <= 1.605 ? 1.0 : 0.0;
    const Field fast = convolve_fast(k, u);
    const double direct_center = convolve_direct_at(k, u, grid.center_index());
    CHECK(std::abs(fast.center() - direct_center) < 1e-10);
}

TEST_CASE("convolution of [0,1]-valued fields stays within the discrete mass") {
    std::mt19937_64 rng(37);
    const Grid grid(6.0, 400);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(0.8), grid);
    REQUIRE(k.mass <= 1.0 + 1e-6);
    for (int rep = 0; rep < 50; ++rep) {
        Field u(grid);
        u.values = oracle::random_field(rng, grid.size());
        const Field v = convolve_fast(k, u);
        for (long i = 0; i <= grid.intervals; ++i) {
            CHECK(v[i] >= -1e-12);
            CHECK(v[i] <= k.mass + 1e-12);
        }
    }
}

TEST_CASE("grid mismatch raises a dimension error") {
    const Grid g1(4.0, 64), g2(4.0, 128);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), g1);
    const Field u(g2, 0.5);
    CHECK_THROWS_AS(convolve_direct(k, u), dimension_error);
    CHECK_THROWS_AS(convolve_fast(k, u), dimension_error);
}

TEST_CASE("kernel transform") {
    const KernelSpec g = KernelSpec::gaussian(1.0);

    SUBCASE("lambda = 0 gives the mass") {
        CHECK(kernel_transform(g, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("gaussian closed form against a quadrature oracle") {
        const double got = kernel_transform(g, 1.0);
        const double ref = oracle::trapezoid(
            [](double y) {
                return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi) * std::exp(-y);
            },
            -40.0, 40.0, 400000);
        CHECK(got == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
        CHECK(got == doctest::Approx(ref).epsilon(1e-10));
    }

    SUBCASE("even kernels have even transforms") {
        for (double lam : {0.3, 0.9, 1.7}) {
            CHECK(std::abs(kernel_transform(g, lam) - kernel_transform(g, -lam)) < 1e-12);
            const KernelSpec b = KernelSpec::bump(1.5);
            CHECK(std::abs(kernel_transform(b, lam) - kernel_transform(b, -lam)) < 1e-12);
        }
    }

    SUBCASE("overflowing transform raises divergence") {
        CHECK_THROWS_AS(kernel_transform(g, 60.0), divergence_error);
    }
}

TEST_CASE("bump kernel: compact support, unit mass, validation") {
    const Grid grid(6.0, 1200);
    const DiscreteKernel k = build_kernel(KernelSpec::bump(1.5), grid);
    CHECK(validate_kernel(k, 1e-5).all_passed());
    for (long m = 0; m <= k.half_range; ++m) {
        if (std::abs(static_cast<double>(m) * k.dx) >= 1.5) CHECK(k.at(m) == 0.0);
    }
}

TEST_CASE("tabulated kernel interpolates and renormalizes") {
    // coarse triangle kernel on [-2, 2]
    std::vector<std::pair<double, double>> tri;
    for (long i = -20; i <= 20; ++i) {
        const double x = 0.1 * static_cast<double>(i);
        tri.emplace_back(x, std::max(0.0, 1.0 - std::abs(x) / 2.0) * 0.5);
    }
    const Grid grid(6.0, 600);
    const DiscreteKernel k = build_kernel(KernelSpec::tabulated(tri, true), grid);
    CHECK(k.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(validate_kernel(k).all_passed());
}
