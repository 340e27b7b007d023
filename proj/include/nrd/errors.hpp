#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nrd {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A KernelSpec / grid / option that is malformed before any hypothesis is checked.
struct invalid_spec_error : error {
    using error::error;
};

// Input violates one of the structural hypotheses on J or f.
struct hypothesis_error : error {
    using error::error;
};

// Two objects live on incompatible grids.
struct dimension_error : error {
    using error::error;
};

// Time step exceeds the order-preservation restriction; refused, never clamped.
struct step_size_error : error {
    using error::error;
};

// Grid too small for the requested construction (indicator width, truncation, ...).
struct domain_error : error {
    using error::error;
};

struct root_not_found_error : error {
    using error::error;
};

struct divergence_error : error {
    using error::error;
};

// Non-finite value produced during evolution; carries the step at which it appeared.
struct numeric_error : error {
    numeric_error(const std::string& what, long step) : error(what), step(step) {}
    long step;
};

struct bracket_error : error {
    using error::error;
};

// Tail fit window lies below the representable contrast floor.
struct window_error : error {
    using error::error;
};

// Iterative front solver failed; keeps the residual history for diagnosis.
struct solver_error : error {
    solver_error(const std::string& what, std::vector<double> history)
        : error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

struct config_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

} // namespace nrd
