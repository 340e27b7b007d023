#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nrd/errors.hpp"

namespace nrd {

// Uniform symmetric grid x_i = -X + i*dx, i = 0..M, with dx = 2X/M.
// M must be even so that x_{M/2} = 0 is a node.
struct Grid {
    double half_width = 0.0; // X
    long intervals = 0;      // M

    Grid() = default;
    Grid(double X, long M) : half_width(X), intervals(M) {
        if (!(X > 0.0)) throw invalid_spec_error("grid half-width must be positive");
        if (M < 2 || M % 2 != 0) throw invalid_spec_error("grid interval count must be even and >= 2");
    }

    double dx() const { return 2.0 * half_width / static_cast<double>(intervals); }
    long size() const { return intervals + 1; }
    long center_index() const { return intervals / 2; }
    double node(long i) const { return -half_width + dx() * static_cast<double>(i); }

    bool operator==(const Grid&) const = default;
};

// A spatial profile on a grid, tagged with the time it was recorded at.
struct Field {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0, double t = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.size()), fill), time(t) {}

    long size() const { return static_cast<long>(values.size()); }
    double& operator[](long i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](long i) const { return values[static_cast<std::size_t>(i)]; }
    double center() const { return values[static_cast<std::size_t>(grid.center_index())]; }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw dimension_error(std::string(what) + ": grid mismatch");
}

} // namespace nrd
