// Acceptance suite: criteria 1-11 with pinned tolerances.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nonpv {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured;
    std::string target;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240611;
    bool quick = false;
    std::vector<int> only;  // empty: all
    std::function<void(const CriterionResult&)> on_result;
};

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// "[PASS] 3  title | measured: ... | target: ... | 1.23 s"
std::string format_result(const CriterionResult& r);

constexpr int kCriterionCount = 11;

}  // namespace nonpv
