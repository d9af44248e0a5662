#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncl {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Property suites exercising the library's mathematical guarantees on
// randomly generated desk-scale instances: df formula agreement and shape,
// eigenvalue bounds, the ridge correspondence, unbiasedness of the risk
// estimate, the noise-optimality direction, the Monte-Carlo df estimator,
// the ambiguity identity, the closed-form solution, and tuning speed.
std::vector<std::string> verify_suite_names();

SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed);

// All suites, or only those whose names appear in `only` (empty = all).
std::vector<SuiteResult> run_verify(std::uint64_t seed,
                                    const std::vector<std::string>& only = {});

} // namespace ncl
