#include "nrd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "nrd/errors.hpp"

namespace nrd {

namespace {

// FFTW's planner is not reentrant; plan creation/destruction is serialized.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double bump_normalizer() {
    // int_{-1}^{1} exp(-1/(1-s^2)) ds by midpoint rule (integrand vanishes to
    // all orders at the endpoints, so convergence is spectral).
    static const double c0 = [] {
        const long n = 200000;
        const double h = 2.0 / static_cast<double>(n);
        double sum = 0.0;
        for (long i = 0; i < n; ++i) {
            const double s = -1.0 + (static_cast<double>(i) + 0.5) * h;
            sum += std::exp(-1.0 / (1.0 - s * s));
        }
        return sum * h;
    }();
    return c0;
}

double interp_table(const std::vector<std::pair<double, double>>& table, double x) {
    if (table.empty()) return 0.0;
    if (x < table.front().first || x > table.back().first) return 0.0;
    auto it = std::lower_bound(table.begin(), table.end(), x,
                               [](const auto& p, double v) { return p.first < v; });
    if (it == table.begin()) return it->second;
    const auto hi = it;
    const auto lo = it - 1;
    const double span = hi->first - lo->first;
    if (span <= 0.0) return lo->second;
    const double w = (x - lo->first) / span;
    return lo->second + w * (hi->second - lo->second);
}

} // namespace

KernelSpec KernelSpec::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw invalid_spec_error("gaussian kernel needs sigma > 0");
    KernelSpec s;
    s.family = KernelFamily::gaussian;
    s.sigma = sigma;
    return s;
}

KernelSpec KernelSpec::bump(double r) {
    if (!(r > 0.0)) throw invalid_spec_error("bump kernel needs half-width r > 0");
    KernelSpec s;
    s.family = KernelFamily::bump;
    s.r = r;
    return s;
}

KernelSpec KernelSpec::tabulated(std::vector<std::pair<double, double>> samples, bool renormalize) {
    if (samples.size() < 2) throw invalid_spec_error("tabulated kernel needs at least 2 samples");
    std::sort(samples.begin(), samples.end());
    for (const auto& [x, v] : samples) {
        if (!std::isfinite(x) || !std::isfinite(v))
            throw invalid_spec_error("tabulated kernel has non-finite entries");
        if (v < 0.0)
            throw hypothesis_error("tabulated kernel density is negative (violates J >= 0)");
    }
    KernelSpec s;
    s.family = KernelFamily::table;
    s.table = std::move(samples);
    s.renormalize = renormalize;
    return s;
}

double KernelSpec::density(double x) const {
    switch (family) {
    case KernelFamily::gaussian: {
        if (!(sigma > 0.0)) throw invalid_spec_error("gaussian kernel needs sigma > 0");
        const double z = x / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    }
    case KernelFamily::bump: {
        if (!(r > 0.0)) throw invalid_spec_error("bump kernel needs half-width r > 0");
        const double s = x / r;
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - s * s)) / (r * bump_normalizer());
    }
    case KernelFamily::table:
        return interp_table(table, std::abs(x));
    }
    throw invalid_spec_error("unknown kernel family");
}

void DiscreteKernel::refresh_moments() {
    // trapezoid over the sampled support, ascending index order
    double m0 = 0.0, m1 = 0.0;
    const long n = num_samples();
    for (long p = 0; p < n; ++p) {
        const double w = (p == 0 || p == n - 1) ? 0.5 : 1.0;
        const double x = dx * static_cast<double>(p - half_range);
        m0 += w * samples[static_cast<std::size_t>(p)];
        m1 += w * std::abs(x) * samples[static_cast<std::size_t>(p)];
    }
    mass = dx * m0;
    first_abs_moment = dx * m1;
}

DiscreteKernel build_kernel(const KernelSpec& spec, const Grid& grid) {
    // validate spec parameters before sampling
    if (spec.family == KernelFamily::gaussian && !(spec.sigma > 0.0))
        throw invalid_spec_error("gaussian kernel needs sigma > 0");
    if (spec.family == KernelFamily::bump && !(spec.r > 0.0))
        throw invalid_spec_error("bump kernel needs half-width r > 0");
    if (spec.family == KernelFamily::table) {
        for (const auto& [x, v] : spec.table)
            if (v < 0.0) throw hypothesis_error("tabulated kernel density is negative");
    }

    DiscreteKernel k;
    k.dx = grid.dx();
    k.half_range = grid.intervals;
    k.samples.resize(static_cast<std::size_t>(2 * k.half_range + 1));

    // sample at |m*dx| so that evenness holds bit-exactly
    for (long m = 0; m <= k.half_range; ++m) {
        const double v = spec.density(std::abs(static_cast<double>(m) * k.dx));
        k.samples[static_cast<std::size_t>(k.half_range + m)] = v;
        k.samples[static_cast<std::size_t>(k.half_range - m)] = v;
    }
    k.refresh_moments();

    if (spec.renormalize && k.mass > 0.0) {
        const double scale = 1.0 / k.mass;
        for (double& v : k.samples) v *= scale;
        k.refresh_moments();
    }
    return k;
}

ValidationReport validate_kernel(const DiscreteKernel& k, double tau_mass) {
    ValidationReport rep;
    rep.subject = "kernel";

    double min_sample = 0.0;
    for (double v : k.samples) min_sample = std::min(min_sample, v);
    rep.checks.push_back({"nonnegative", min_sample >= 0.0, min_sample,
                          "min sample"});

    bool even = true;
    for (long m = 1; m <= k.half_range && even; ++m)
        even = k.at(m) == k.at(-m); // bit-identical by construction
    rep.checks.push_back({"even", even, even ? 1.0 : 0.0, "J_m == J_{-m} exactly"});

    rep.checks.push_back({"unit_mass", std::abs(k.mass - 1.0) <= tau_mass, k.mass,
                          "discrete mass"});

    rep.checks.push_back({"finite_first_moment", std::isfinite(k.first_abs_moment),
                          k.first_abs_moment, "int |x| J"});
    return rep;
}

double convolve_direct_at(const DiscreteKernel& k, const Field& u, long i) {
    const long M = u.grid.intervals;
    if (k.half_range < M || k.dx != u.grid.dx())
        throw dimension_error("convolve: kernel was built for a different grid");
    double sum = 0.0;
    for (long m = 0; m <= M; ++m) {
        const double w = (m == 0 || m == M) ? 0.5 : 1.0;
        sum += w * k.at(m - i) * u[m];
    }
    return k.dx * sum;
}

Field convolve_direct(const DiscreteKernel& k, const Field& u) {
    Field out(u.grid, 0.0, u.time);
    const long M = u.grid.intervals;
    for (long i = 0; i <= M; ++i) out[i] = convolve_direct_at(k, u, i);
    return out;
}

struct FastConvolver::Impl {
    long padded = 0;
    long field_len = 0;
    double* in = nullptr;
    fftw_complex* freq = nullptr;
    fftw_complex* kernel_freq = nullptr;
    fftw_plan fwd{};
    fftw_plan bwd{};

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (in) fftw_free(in);
        if (freq) fftw_free(freq);
        if (kernel_freq) fftw_free(kernel_freq);
    }
};

FastConvolver::FastConvolver(const DiscreteKernel& k, const Grid& grid)
    : impl_(std::make_unique<Impl>()), grid_(grid), dx_(k.dx), half_range_(k.half_range) {
    const long M = grid.intervals;
    if (k.half_range < M || k.dx != grid.dx())
        throw dimension_error("fast convolver: kernel was built for a different grid");

    const long klen = k.num_samples();
    const long need = (M + 1) + klen - 1; // linear convolution length
    long padded = 1;
    while (padded < need) padded <<= 1;
    impl_->padded = padded;
    impl_->field_len = M + 1;

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        impl_->in = fftw_alloc_real(static_cast<std::size_t>(padded));
        impl_->freq = fftw_alloc_complex(static_cast<std::size_t>(padded / 2 + 1));
        impl_->kernel_freq = fftw_alloc_complex(static_cast<std::size_t>(padded / 2 + 1));
        impl_->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(padded), impl_->in, impl_->freq,
                                          FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_c2r_1d(static_cast<int>(padded), impl_->freq, impl_->in,
                                          FFTW_ESTIMATE);
    }

    // spectrum of the reversed samples: output n of u * rev(J) at n = i + H
    // equals sum_m J((m-i) dx) u_m, the correlation the quadrature needs
    std::fill(impl_->in, impl_->in + padded, 0.0);
    for (long p = 0; p < klen; ++p)
        impl_->in[p] = k.samples[static_cast<std::size_t>(klen - 1 - p)];
    fftw_execute(impl_->fwd);
    std::memcpy(impl_->kernel_freq, impl_->freq,
                sizeof(fftw_complex) * static_cast<std::size_t>(padded / 2 + 1));
}

FastConvolver::~FastConvolver() = default;

void FastConvolver::apply(const Field& u, Field& out) {
    require_same_grid(u.grid, grid_, "fast convolver");
    const long M = grid_.intervals;
    const long padded = impl_->padded;

    std::fill(impl_->in, impl_->in + padded, 0.0);
    // trapezoid endpoint half-weights are applied to the field, not the kernel
    impl_->in[0] = 0.5 * u[0];
    for (long m = 1; m < M; ++m) impl_->in[m] = u[m];
    impl_->in[M] = 0.5 * u[M];

    fftw_execute(impl_->fwd);
    const double scale = dx_ / static_cast<double>(padded);
    const long nf = padded / 2 + 1;
    for (long j = 0; j < nf; ++j) {
        const double ar = impl_->freq[j][0], ai = impl_->freq[j][1];
        const double br = impl_->kernel_freq[j][0], bi = impl_->kernel_freq[j][1];
        impl_->freq[j][0] = ar * br - ai * bi;
        impl_->freq[j][1] = ar * bi + ai * br;
    }
    fftw_execute(impl_->bwd);

    out.grid = grid_;
    out.time = u.time;
    out.values.resize(static_cast<std::size_t>(M + 1));
    for (long i = 0; i <= M; ++i) out[i] = scale * impl_->in[i + half_range_];
}

Field FastConvolver::apply(const Field& u) {
    Field out;
    apply(u, out);
    return out;
}

Field convolve_fast(const DiscreteKernel& k, const Field& u) {
    FastConvolver conv(k, u.grid);
    return conv.apply(u);
}

double kernel_transform(const KernelSpec& spec, double lambda) {
    switch (spec.family) {
    case KernelFamily::gaussian: {
        const double e = 0.5 * spec.sigma * spec.sigma * lambda * lambda;
        if (e > 700.0) throw divergence_error("kernel transform overflows at this lambda");
        return std::exp(e);
    }
    case KernelFamily::bump: {
        // midpoint rule on the compact support
        const long n = 20000;
        const double h = 2.0 * spec.r / static_cast<double>(n);
        double sum = 0.0;
        for (long i = 0; i < n; ++i) {
            const double y = -spec.r + (static_cast<double>(i) + 0.5) * h;
            sum += spec.density(y) * std::exp(-lambda * y);
        }
        const double v = sum * h;
        if (!std::isfinite(v)) throw divergence_error("kernel transform overflows at this lambda");
        return v;
    }
    case KernelFamily::table: {
        // trapezoid on the symmetrized table grid
        if (spec.table.size() < 2) throw invalid_spec_error("tabulated kernel needs samples");
        const double xmax = spec.table.back().first;
        const long n = static_cast<long>(spec.table.size()) * 8;
        const double h = 2.0 * xmax / static_cast<double>(n);
        double sum = 0.0;
        for (long i = 0; i <= n; ++i) {
            const double y = -xmax + h * static_cast<double>(i);
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            sum += w * spec.density(y) * std::exp(-lambda * y);
        }
        const double v = sum * h;
        if (!std::isfinite(v)) throw divergence_error("kernel transform diverges at this lambda");
        return v;
    }
    }
    throw invalid_spec_error("unknown kernel family");
}

} // namespace nrd
