// Acceptance gate: runs every property suite once and grades the twelve
// release criteria from the results, one pass/fail line per criterion.
#include <cstdio>
#include <string>
#include <vector>

#include "ncl/verify.hpp"

namespace {

const ncl::SuiteResult* find_suite(const std::vector<ncl::SuiteResult>& suites,
                                   const std::string& name) {
    for (const auto& s : suites)
        if (s.name == name) return &s;
    return nullptr;
}

bool check_passed(const ncl::SuiteResult* suite, const std::string& needle) {
    if (!suite) return false;
    for (const auto& c : suite->checks)
        if (c.name.find(needle) != std::string::npos) return c.passed;
    return false;
}

struct Grader {
    int failures = 0;
    int index = 0;
    void criterion(const std::string& text, bool ok) {
        ++index;
        std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", index, text.c_str());
        if (!ok) ++failures;
    }
};

}  // namespace

int main() {
    const std::uint64_t seed = 42;
    const std::vector<ncl::SuiteResult> suites = ncl::run_verify(seed);

    const auto* df = find_suite(suites, "df-agreement");
    const auto* spectral = find_suite(suites, "spectral-bounds");
    const auto* tik = find_suite(suites, "tikhonov");
    const auto* sure = find_suite(suites, "sure-unbiased");
    const auto* noise = find_suite(suites, "noise-optimality");
    const auto* mc = find_suite(suites, "mc-df");
    const auto* closed = find_suite(suites, "closed-form");
    const auto* amb = find_suite(suites, "ambiguity");
    const auto* speed = find_suite(suites, "tuning-speed");

    double total_seconds = 0.0;
    bool all_passed = true;
    for (const auto& s : suites) {
        total_seconds += s.seconds;
        all_passed = all_passed && s.passed();
        for (const auto& c : s.checks)
            if (!c.passed)
                std::printf("  detail [%s / %s]: %s\n", s.name.c_str(), c.name.c_str(),
                            c.detail.c_str());
    }

    Grader g;
    g.criterion("three-way df agreement on random instances, under 30 s",
                check_passed(df, "three-way df agreement") && df && df->seconds < 30.0);
    g.criterion("df endpoints: count at zero, rank at one",
                check_passed(df, "df endpoints"));
    g.criterion("df monotone and convex, train error monotone",
                check_passed(df, "df nondecreasing") &&
                    check_passed(df, "second differences nonnegative") &&
                    check_passed(df, "train error nonincreasing") &&
                    check_passed(df, "strict monotonicity"));
    g.criterion("whitened spectrum bounds and trace/rank identities",
                spectral && spectral->passed());
    g.criterion("ridge correspondence, including rank-deficient bases",
                tik && tik->passed());
    g.criterion("risk estimate unbiased over noise redraws, under 2 min",
                sure && sure->passed() && sure->seconds < 120.0);
    g.criterion("noise pushes the best diversity below one, slope formula exact",
                noise && noise->passed());
    g.criterion("Monte-Carlo df matches the closed form, step-size independent",
                mc && mc->passed());
    g.criterion("closed-form coefficients match gradient descent",
                closed && closed->passed());
    g.criterion("error decomposition identity on fuzzed inputs",
                amb && amb->passed());
    g.criterion("analytic tuning beats cross-validation threefold, same quality",
                speed && speed->passed());
    g.criterion("all property suites pass with total runtime under 5 min",
                all_passed && total_seconds < 300.0);

    std::printf("%d/%d criteria passed (%.1f s total)\n", g.index - g.failures, g.index,
                total_seconds);
    return g.failures == 0 ? 0 : 1;
}
