#include "nrd/front.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "nrd/errors.hpp"

namespace nrd {

namespace {

struct FrontWorkspace {
    Grid grid;
    long m = 0;  // intervals; unknowns are U_1..U_{m-1} and c
    long j0 = 0; // node at xi = 0
    double dxi = 0.0;
    const DiscreteKernel* kernel = nullptr;
    const Nonlinearity* nl = nullptr;
    FastConvolver conv;
    std::vector<double> tail; // right-tail mass int_{l-xi_j}^{inf} J, U == 1 there

    FrontWorkspace(const DiscreteKernel& k, const Nonlinearity& nl_, const Grid& g)
        : grid(g), m(g.intervals), j0(g.center_index()), dxi(g.dx()), kernel(&k), nl(&nl_),
          conv(k, g) {
        // suffix trapezoid sums of the nonnegative-offset samples
        const long P = k.half_range;
        std::vector<double> suffix(static_cast<std::size_t>(P + 1), 0.0);
        for (long a = P - 1; a >= 0; --a)
            suffix[static_cast<std::size_t>(a)] = suffix[static_cast<std::size_t>(a + 1)] +
                                                  0.5 * dxi * (k.at(a) + k.at(a + 1));
        tail.resize(static_cast<std::size_t>(m + 1));
        for (long j = 0; j <= m; ++j)
            tail[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(m - j)];
    }

    // residual of the clamped discrete front equation; also exposes U'
    void residual(const std::vector<double>& U, double c, std::vector<double>& R,
                  std::vector<double>& dU) {
        Field uf(grid);
        uf.values = U;
        Field cv = conv.apply(uf);
        dU.assign(static_cast<std::size_t>(m + 1), 0.0);
        for (long j = 1; j < m; ++j)
            dU[static_cast<std::size_t>(j)] =
                (U[static_cast<std::size_t>(j + 1)] - U[static_cast<std::size_t>(j - 1)]) /
                (2.0 * dxi);
        R.assign(static_cast<std::size_t>(m), 0.0);
        for (long j = 1; j < m; ++j) {
            const double u = U[static_cast<std::size_t>(j)];
            R[static_cast<std::size_t>(j - 1)] = c * dU[static_cast<std::size_t>(j)] + cv[j] +
                                                 tail[static_cast<std::size_t>(j)] - u - nl->f(u);
        }
        R[static_cast<std::size_t>(m - 1)] = U[static_cast<std::size_t>(j0)] - nl->alpha();
    }
};

double inf_norm(const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
}

} // namespace

FrontSolution front_solve(const DiscreteKernel& k, const Nonlinearity& nl, double half_width,
                          double dxi, const std::optional<std::vector<double>>& init,
                          const FrontOptions& opts) {
    const long m = std::lround(2.0 * half_width / dxi);
    if (m < 8 || m % 2 != 0)
        throw invalid_spec_error("front grid needs an even interval count >= 8");
    Grid grid(half_width, m);
    if (std::abs(k.dx - grid.dx()) > 1e-12 * grid.dx() || k.half_range < m)
        throw dimension_error("front kernel must be sampled on the moving-frame grid");

    FrontWorkspace ws(k, nl, grid);
    const double alpha = nl.alpha();

    std::vector<double> U(static_cast<std::size_t>(m + 1));
    if (init) {
        if (static_cast<long>(init->size()) != m + 1)
            throw dimension_error("front initial guess has the wrong length");
        U = *init;
    } else {
        // logistic ramp through (0, alpha)
        const double shift = (1.0 - alpha) / alpha;
        for (long j = 0; j <= m; ++j)
            U[static_cast<std::size_t>(j)] = 1.0 / (1.0 + shift * std::exp(-grid.node(j)));
    }
    U.front() = 0.0;
    U.back() = 1.0;
    double c = 6.0 * nl.F(1.0); // speed identity with the logistic's int (U')^2 = 1/6

    const long n = m; // m-1 interior unknowns + c
    std::vector<double> A(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<double> rhs(static_cast<std::size_t>(n));
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    std::vector<double> R, dU, Rn, dUn, Un(U);

    ws.residual(U, c, R, dU);
    double rnorm = inf_norm(R);
    std::vector<double> history{rnorm};

    long it = 0;
    for (; it < opts.max_iter && rnorm >= opts.tol; ++it) {
        // augmented Jacobian, column-major
        std::fill(A.begin(), A.end(), 0.0);
        for (long col = 0; col < m - 1; ++col) {
            double* a = &A[static_cast<std::size_t>(col) * static_cast<std::size_t>(n)];
            // convolution block: d(J*U)_j / dU_k = dxi * J((k-j) dxi)
            for (long row = 0; row < m - 1; ++row)
                a[row] = dxi * k.at(col - row);
            a[col] += -1.0 - nl.f_prime(U[static_cast<std::size_t>(col + 1)]);
            if (col + 1 <= m - 2) a[col + 1] -= c / (2.0 * dxi); // dR_{j+1}/dU_j
            if (col - 1 >= 0) a[col - 1] += c / (2.0 * dxi);     // dR_{j-1}/dU_j
        }
        {
            double* a = &A[static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n)];
            for (long row = 0; row < m - 1; ++row)
                a[row] = dU[static_cast<std::size_t>(row + 1)]; // d/dc
        }
        A[static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(ws.j0 - 1) *
                                                static_cast<std::size_t>(n)] = 1.0; // phase row

        for (long i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] = -R[static_cast<std::size_t>(i)];
        const lapack_int info = LAPACKE_dgesv(LAPACK_COL_MAJOR, static_cast<lapack_int>(n), 1,
                                              A.data(), static_cast<lapack_int>(n), ipiv.data(),
                                              rhs.data(), static_cast<lapack_int>(n));
        if (info != 0)
            throw solver_error("front linearization is singular (dgesv info=" +
                                   std::to_string(info) + ")",
                               history);

        // step halving on residual increase
        double lambda = 1.0;
        bool accepted = false;
        double cn = c, rn = rnorm;
        for (long h = 0; h <= opts.max_halvings; ++h) {
            for (long j = 1; j < m; ++j)
                Un[static_cast<std::size_t>(j)] =
                    U[static_cast<std::size_t>(j)] + lambda * rhs[static_cast<std::size_t>(j - 1)];
            Un.front() = 0.0;
            Un.back() = 1.0;
            cn = c + lambda * rhs[static_cast<std::size_t>(n - 1)];
            ws.residual(Un, cn, Rn, dUn);
            rn = inf_norm(Rn);
            if (rn < rnorm) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw solver_error("front iteration stalled at |R| = " + std::to_string(rnorm),
                               history);
        U.swap(Un);
        c = cn;
        R.swap(Rn);
        dU.swap(dUn);
        rnorm = rn;
        history.push_back(rnorm);
    }
    if (rnorm >= opts.tol)
        throw solver_error("front solver did not reach tolerance after " +
                               std::to_string(opts.max_iter) + " iterations (|R| = " +
                               std::to_string(rnorm) + ")",
                           history);

    FrontSolution fs;
    fs.grid = grid;
    fs.profile = U;
    fs.speed = c;
    fs.residual_norm = rnorm;
    fs.phase_value = U[static_cast<std::size_t>(ws.j0)];
    fs.iterations = it;
    fs.residual_history = std::move(history);
    fs.residual.assign(static_cast<std::size_t>(m + 1), 0.0);
    for (long j = 1; j < m; ++j)
        fs.residual[static_cast<std::size_t>(j)] = R[static_cast<std::size_t>(j - 1)];
    fs.monotone = true;
    for (long j = 0; j < m; ++j)
        if (U[static_cast<std::size_t>(j + 1)] < U[static_cast<std::size_t>(j)] - 1e-8)
            fs.monotone = false;
    return fs;
}

double speed_identity_residual(const FrontSolution& fs, const Nonlinearity& nl) {
    const long m = fs.grid.intervals;
    const double dxi = fs.grid.dx();
    const auto& U = fs.profile;
    double sum = 0.0;
    for (long j = 0; j <= m; ++j) {
        double d;
        if (j == 0)
            d = (U[1] - U[0]) / dxi;
        else if (j == m)
            d = (U[static_cast<std::size_t>(m)] - U[static_cast<std::size_t>(m - 1)]) / dxi;
        else
            d = (U[static_cast<std::size_t>(j + 1)] - U[static_cast<std::size_t>(j - 1)]) /
                (2.0 * dxi);
        sum += d * d;
    }
    return std::abs(fs.speed * sum * dxi - nl.F(1.0));
}

namespace {

double dispersion_root(const KernelSpec& spec, double c, double fprime, bool negative) {
    auto g = [&](double lam) {
        double transform;
        try {
            transform = kernel_transform(spec, lam);
        } catch (const divergence_error&) {
            transform = std::numeric_limits<double>::infinity();
        }
        return c * lam + transform - 1.0 - fprime;
    };
    // g(0) = -f'(state) < 0 and the transform dominates for large |lambda|
    double inner = negative ? -1e-6 : 1e-6;
    double outer = negative ? -1.0 : 1.0;
    long guard = 0;
    while (g(outer) <= 0.0) {
        outer *= 2.0;
        if (++guard > 60)
            throw root_not_found_error("dispersion relation has no sign change in the bracket");
    }
    double lo = std::min(inner, outer), hi = std::max(inner, outer);
    double glo = g(lo);
    for (long i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((glo <= 0.0 && gm <= 0.0) || (glo > 0.0 && gm > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::pair<double, double> char_roots(const KernelSpec& spec, const Nonlinearity& nl, double c) {
    const double lam1 = dispersion_root(spec, c, nl.f_prime(1.0), true);
    const double lam2 = dispersion_root(spec, c, nl.f_prime(0.0), false);
    return {lam1, lam2};
}

std::pair<double, double> measure_tail_rates(const FrontSolution& fs) {
    const long m = fs.grid.intervals;
    const double l = fs.grid.half_width;

    auto fit = [&](double lo, double hi, bool upper_tail) {
        std::vector<double> xs, ys;
        for (long j = 0; j <= m; ++j) {
            const double xi = fs.grid.node(j);
            if (xi < lo || xi > hi) continue;
            const double v = upper_tail ? 1.0 - fs.profile[static_cast<std::size_t>(j)]
                                        : fs.profile[static_cast<std::size_t>(j)];
            if (v < 1e-14)
                throw window_error("tail contrast below 1e-14 in the fit window; "
                                   "shrink the domain or move the window inward");
            xs.push_back(xi);
            ys.push_back(std::log(v));
        }
        if (xs.size() < 8) throw window_error("too few nodes in the tail fit window");
        const double nx = static_cast<double>(xs.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= nx;
        my /= nx;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        return num / den;
    };

    const double lam1 = fit(l / 4.0, l / 2.0, true);
    const double lam2 = fit(-l / 2.0, -l / 4.0, false);
    return {lam1, lam2};
}

} // namespace nrd
