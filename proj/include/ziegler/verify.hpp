#pragma once

#include <string>
#include <vector>

namespace ziegler::verify {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::string golden_dir;  ///< empty: skip comparisons against committed files
    bool update_golden = false;
    int jobs = 1;
};

/// Runs the full closed-form cross-check suite (the repo's
/// self-demonstration) and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);

/// Prints one pass/fail line per criterion; returns the failure count.
int print_results(const std::vector<CriterionResult>& results);

}  // namespace ziegler::verify
