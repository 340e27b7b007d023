#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nrd/grid.hpp"
#include "nrd/kernel.hpp"
#include "nrd/reaction.hpp"

namespace nrd {

// Resolved run configuration. Defaults mirror the reference experiment:
// X = 120, M = 48000, T = 200, N = 400, alpha = 0.4, Gaussian sigma = 1,
// L = 1.605 (so dt = 0.5).
struct RunConfig {
    struct Kernel {
        std::string family = "gaussian"; // gaussian | bump | table
        double sigma = 1.0;
        double r = 1.0;
        std::string table_path;
        bool renormalize = false;
        bool operator==(const Kernel&) const = default;
    } kernel;

    struct Reaction {
        std::string family = "cubic"; // cubic | table
        double alpha = 0.4;
        std::string table_path;
        bool operator==(const Reaction&) const = default;
    } reaction;

    struct GridSec {
        double X = 120.0;
        long M = 48000;
        bool operator==(const GridSec&) const = default;
    } grid;

    struct Time {
        double T = 200.0;
        long N = 400;
        bool operator==(const Time&) const = default;
    } time;

    struct Init {
        double L = 1.605;
        bool operator==(const Init&) const = default;
    } init;

    struct Output {
        std::string dir = "out";
        std::string snapshots = "dyadic"; // dyadic | all | none
        int precision = 17;
        bool operator==(const Output&) const = default;
    } output;

    struct Energy {
        long stride = 1; // snapshot stride for the energy subcommand
        bool operator==(const Energy&) const = default;
    } energy;

    struct Sweep {
        std::vector<std::pair<double, double>> pairs; // (alpha, L)
        bool operator==(const Sweep&) const = default;
    } sweep;

    std::uint64_t seed = 0;

    double dt() const { return time.T / static_cast<double>(time.N); }
    Grid make_grid() const { return Grid(grid.X, grid.M); }
    KernelSpec make_kernel_spec() const;
    Nonlinearity make_nonlinearity() const;

    bool operator==(const RunConfig&) const = default;
};

// Plain-text key=value format with dotted section prefixes; '#' comments.
// Unknown keys are rejected; parse errors carry the line number.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Canonical serialization; parse_config_text(emit_config(c)) == c for every
// valid c.
std::string emit_config(const RunConfig& c);

// Two-column whitespace-separated table loader used for kernel.table_path
// and reaction.table_path.
std::vector<std::pair<double, double>> load_table(const std::string& path);

} // namespace nrd
