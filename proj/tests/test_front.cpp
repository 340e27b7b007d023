#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nrd/errors.hpp"
#include "nrd/front.hpp"
#include "oracles.hpp"

using namespace nrd;

namespace {

// small moving frame: solves in well under a second
constexpr double kEll = 24.0;
constexpr double kDxi = 0.06;

FrontSolution solve_alpha(double alpha, double tol = 1e-11) {
    const long m = std::lround(2.0 * kEll / kDxi);
    const Grid grid(kEll, m);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    FrontOptions opts;
    opts.tol = tol;
    return front_solve(k, Nonlinearity::cubic(alpha), kEll, kDxi, std::nullopt, opts);
}

} // namespace

TEST_CASE("balanced cubic has a standing front") {
    const FrontSolution fs = solve_alpha(0.5);
    CHECK(std::abs(fs.speed) < 1e-9);
    CHECK(fs.monotone);
    CHECK(fs.residual_norm < 1e-11);
    CHECK(fs.phase_value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fs.profile.front() <= 1e-4);
    CHECK(1.0 - fs.profile.back() <= 1e-4);
    CHECK(speed_identity_residual(fs, Nonlinearity::cubic(0.5)) < 1e-8);
}

TEST_CASE("alpha = 0.4 front moves left") {
    const FrontSolution fs = solve_alpha(0.4);
    CHECK(fs.speed < 0.0);
    CHECK(fs.monotone);
    // quadrature error budget at this resolution
    CHECK(speed_identity_residual(fs, Nonlinearity::cubic(0.4)) < 1e-3);
}

TEST_CASE("speed changes sign with the integral of f") {
    for (double alpha : {0.3, 0.4, 0.5, 0.6, 0.7}) {
        const FrontSolution fs = solve_alpha(alpha);
        const double F1 = Nonlinearity::cubic(alpha).F(1.0);
        if (alpha < 0.5) {
            CHECK(fs.speed < 0.0);
            CHECK(F1 < 0.0);
        } else if (alpha > 0.5) {
            CHECK(fs.speed > 0.0);
            CHECK(F1 > 0.0);
        }
    }
}

TEST_CASE("reflection law c(alpha) + c(1 - alpha) = 0") {
    for (double alpha : {0.3, 0.4}) {
        const FrontSolution a = solve_alpha(alpha);
        const FrontSolution b = solve_alpha(1.0 - alpha);
        CHECK(std::abs(a.speed + b.speed) < 1e-8);
    }
}

TEST_CASE("perturbing c breaks the speed identity linearly") {
    FrontSolution fs = solve_alpha(0.4);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);
    const double base = speed_identity_residual(fs, nl);
    fs.speed += 0.01;
    const double perturbed = speed_identity_residual(fs, nl);
    CHECK(perturbed > 1e-3);
    CHECK(perturbed > 100.0 * base);
}

TEST_CASE("characteristic roots of the dispersion relation") {
    const KernelSpec spec = KernelSpec::gaussian(1.0);

    SUBCASE("balanced case against the closed form") {
        const Nonlinearity nl = Nonlinearity::cubic(0.5);
        const auto [lam1, lam2] = char_roots(spec, nl, 0.0);
        const double target = std::sqrt(2.0 * std::log(1.5));
        CHECK(lam1 == doctest::Approx(-target).epsilon(1e-8));
        CHECK(lam2 == doctest::Approx(target).epsilon(1e-8));

        // independent scalar bisection oracle for the same relation
        const double ref = oracle::bisect(
            [&](double lam) { return std::exp(0.5 * lam * lam) - 1.5; }, 0.0, 3.0, 1e-12);
        CHECK(lam2 == doctest::Approx(ref).epsilon(1e-8));
    }

    SUBCASE("solved front keeps the sign convention lambda1 < 0 < lambda2") {
        const FrontSolution fs = solve_alpha(0.4);
        const auto [lam1, lam2] = char_roots(spec, Nonlinearity::cubic(0.4), fs.speed);
        CHECK(lam1 < 0.0);
        CHECK(lam2 > 0.0);
    }
}

TEST_CASE("measured tail rates") {
    SUBCASE("synthetic logistic has unit rates") {
        const long m = std::lround(2.0 * kEll / kDxi);
        const Grid grid(kEll, m);
        FrontSolution fs;
        fs.grid = grid;
        fs.profile.resize(static_cast<std::size_t>(m + 1));
        for (long j = 0; j <= m; ++j)
            fs.profile[static_cast<std::size_t>(j)] = 1.0 / (1.0 + std::exp(-grid.node(j)));
        const auto [lam1, lam2] = measure_tail_rates(fs);
        CHECK(lam1 == doctest::Approx(-1.0).epsilon(0.02));
        CHECK(lam2 == doctest::Approx(1.0).epsilon(0.02));
    }

    SUBCASE("balanced front matches the dispersion rate within 2%") {
        const FrontSolution fs = solve_alpha(0.5);
        const auto [lam1, lam2] = measure_tail_rates(fs);
        const double target = std::sqrt(2.0 * std::log(1.5));
        CHECK(lam1 == doctest::Approx(-target).epsilon(0.02));
        CHECK(lam2 == doctest::Approx(target).epsilon(0.02));
    }

    SUBCASE("rates agree with char_roots within 5% for a moving front") {
        const FrontSolution fs = solve_alpha(0.4);
        const auto [fit1, fit2] = measure_tail_rates(fs);
        const auto [lam1, lam2] = char_roots(KernelSpec::gaussian(1.0),
                                             Nonlinearity::cubic(0.4), fs.speed);
        CHECK(fit1 == doctest::Approx(lam1).epsilon(0.05));
        CHECK(fit2 == doctest::Approx(lam2).epsilon(0.05));
    }

    SUBCASE("a window below the contrast floor is refused") {
        // rates ~0.9: at l = 80 the window [20, 40] bottoms out below 1e-14
        const double ell = 80.0, dxi = 0.25;
        const long m = std::lround(2.0 * ell / dxi);
        const Grid grid(ell, m);
        const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
        const FrontSolution fs = front_solve(k, Nonlinearity::cubic(0.5), ell, dxi);
        CHECK_THROWS_AS(measure_tail_rates(fs), window_error);
    }
}

TEST_CASE("translation gauge: shifted initialization lands on the same front") {
    const long m = std::lround(2.0 * kEll / kDxi);
    const Grid grid(kEll, m);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    const Nonlinearity nl = Nonlinearity::cubic(0.4);
    FrontOptions opts;
    opts.tol = 1e-11;

    const FrontSolution base = front_solve(k, nl, kEll, kDxi, std::nullopt, opts);

    std::vector<double> shifted(static_cast<std::size_t>(m + 1));
    for (long j = 0; j <= m; ++j) {
        const double xi = grid.node(j) - 3.0;
        shifted[static_cast<std::size_t>(j)] = 1.0 / (1.0 + (0.6 / 0.4) * std::exp(-xi));
    }
    const FrontSolution moved = front_solve(k, nl, kEll, kDxi, shifted, opts);

    CHECK(std::abs(base.speed - moved.speed) < 1e-8);
    double du = 0.0;
    for (std::size_t j = 0; j < base.profile.size(); ++j)
        du = std::max(du, std::abs(base.profile[j] - moved.profile[j]));
    CHECK(du < 1e-7);
}

TEST_CASE("monotone profiles from converged solves") {
    for (double alpha : {0.35, 0.5, 0.65}) {
        const FrontSolution fs = solve_alpha(alpha);
        for (std::size_t j = 0; j + 1 < fs.profile.size(); ++j)
            CHECK(fs.profile[j + 1] >= fs.profile[j] - 1e-8);
    }
}

TEST_CASE("solver failure carries the residual history") {
    const long m = std::lround(2.0 * kEll / kDxi);
    const Grid grid(kEll, m);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), grid);
    FrontOptions opts;
    opts.max_iter = 1; // cannot converge in one damped step
    opts.tol = 1e-13;
    try {
        front_solve(k, Nonlinearity::cubic(0.4), kEll, kDxi, std::nullopt, opts);
        FAIL("expected solver_error");
    } catch (const solver_error& e) {
        CHECK(e.residual_history.size() >= 1);
    }
}

TEST_CASE("kernel grid mismatch is refused") {
    const Grid wrong(kEll, 100);
    const DiscreteKernel k = build_kernel(KernelSpec::gaussian(1.0), wrong);
    CHECK_THROWS_AS(front_solve(k, Nonlinearity::cubic(0.4), kEll, kDxi), dimension_error);
}
