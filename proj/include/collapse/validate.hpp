#pragma once

#include <string>
#include <vector>

namespace collapse {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Built-in cross-check suite: closed forms vs. solvers vs. small Monte
// Carlo, including the golden values of the two worked examples.
// tol_scale multiplies every tolerance (the test harness uses a tiny scale
// to exercise the failure path).
std::vector<CheckResult> run_validation(double tol_scale = 1.0);

}  // namespace collapse
