#pragma once

#include <string>
#include <vector>

namespace nrd {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0; // the quantity the check looked at, for reporting
    std::string detail;
};

// Pass/fail ledger for the (H1)-(H3) style validators. Failures are carried,
// not thrown; an object failing any check is unusable for evolution.
struct ValidationReport {
    std::string subject;
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    std::string summary() const;
};

} // namespace nrd
