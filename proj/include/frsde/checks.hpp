#pragma once

#include <string>
#include <vector>

namespace frsde::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// The property/acceptance suite: every check pins its own tolerances and
/// seeds and is deterministic. Ids run 1..12.
std::vector<CheckResult> run_all();

CheckResult run_check(int id);

/// One "[PASS]/[FAIL] id name: detail [t s]" line per result.
void print_results(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace frsde::checks
