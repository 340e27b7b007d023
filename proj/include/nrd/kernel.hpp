#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nrd/grid.hpp"
#include "nrd/validation.hpp"

namespace nrd {

enum class KernelFamily { gaussian, bump, table };

// Description of the convolution kernel J before discretization.
// Gaussian: J(x) = exp(-x^2/(2 sigma^2)) / (sigma sqrt(2 pi)), unit mass.
// Bump: standard mollifier supported on [-r, r], normalized to unit mass.
// Table: sampled density, interpreted as J(|x|) by linear interpolation,
//        zero outside the tabulated range.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma = 1.0;
    double r = 1.0;
    std::vector<std::pair<double, double>> table; // (offset, density)
    bool renormalize = false; // rescale discrete mass to 1 at build time

    static KernelSpec gaussian(double sigma);
    static KernelSpec bump(double r);
    static KernelSpec tabulated(std::vector<std::pair<double, double>> samples,
                                bool renormalize = false);

    // Pointwise density. Throws invalid_spec_error / hypothesis_error on a
    // malformed spec, same checks as the named constructors.
    double density(double x) const;
};

// Grid-sampled kernel: samples[p] = J((p - half_range) * dx) for
// p = 0..2*half_range, covering offsets over the grid's full width.
// Evenness is held exactly because construction samples |m*dx|.
// Endpoint half-weights are not baked into the samples; they belong to the
// convolution quadrature so the same samples serve both paths.
struct DiscreteKernel {
    double dx = 0.0;
    long half_range = 0;
    std::vector<double> samples;
    double mass = 0.0;             // trapezoid over the sampled support
    double first_abs_moment = 0.0; // trapezoid of |x| J(x)

    double at(long offset) const { return samples[static_cast<std::size_t>(offset + half_range)]; }
    long num_samples() const { return 2 * half_range + 1; }

    // Recompute mass / moment from the current samples (used after edits).
    void refresh_moments();
};

DiscreteKernel build_kernel(const KernelSpec& spec, const Grid& grid);

// Checks nonnegativity, exact evenness, unit mass within tau_mass, and a
// finite first absolute moment. A kernel failing any check is unusable for
// evolution; the report carries the failures rather than throwing.
ValidationReport validate_kernel(const DiscreteKernel& k, double tau_mass = 1e-6);

// Reference quadrature path (paper scheme):
//   (J*u)_i = dx [ 1/2 J(x_0-x_i) u_0 + sum_{m=1}^{M-1} J(x_m-x_i) u_m
//                 + 1/2 J(x_M-x_i) u_M ],
// values beyond the grid treated as zero. Summation runs in ascending index
// order so results are reproducible bit-for-bit.
Field convolve_direct(const DiscreteKernel& k, const Field& u);
double convolve_direct_at(const DiscreteKernel& k, const Field& u, long i);

// O(M log M) spectral path: zero-padded real FFT linear convolution of the
// endpoint-weighted samples. Identical to convolve_direct up to 1e-10
// absolute; padding covers the kernel support so no wrap-around occurs.
// One instance per thread; construction is serialized internally (FFTW
// planner), apply() is safe to run concurrently on distinct instances.
class FastConvolver {
public:
    FastConvolver(const DiscreteKernel& k, const Grid& grid);
    ~FastConvolver();
    FastConvolver(const FastConvolver&) = delete;
    FastConvolver& operator=(const FastConvolver&) = delete;

    Field apply(const Field& u);
    void apply(const Field& u, Field& out);

    const Grid& grid() const { return grid_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Grid grid_;
    double dx_;
    long half_range_;
};

// Convenience one-shot wrapper around FastConvolver.
Field convolve_fast(const DiscreteKernel& k, const Field& u);

// Two-sided Laplace transform J^(lambda) = int J(y) exp(-lambda y) dy.
// Closed form exp(sigma^2 lambda^2 / 2) for the Gaussian family; quadrature
// for bump and tabulated kernels. Throws divergence_error if the transform
// is not representable (overflow of the integrand).
double kernel_transform(const KernelSpec& spec, double lambda);

} // namespace nrd
