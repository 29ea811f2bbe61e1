#pragma once

// Property checks over every module, runnable from the CLI without a test
// framework. Each check is deterministic (fixed seeds).

#include <functional>
#include <string>
#include <vector>

namespace levinquad {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class InjectedFault { none, diff_matrix };

struct SelftestOptions {
    /// Run only checks of this module ("" runs all).
    std::string filter;
    /// Deliberately corrupts an input so that the suite must fail.
    InjectedFault fault = InjectedFault::none;
};

/// Module names in run order.
[[nodiscard]] const std::vector<std::string>& selftest_modules();

[[nodiscard]] std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

/// Pinned regression value of the 2-norm of the 12-point differentiation matrix.
inline constexpr double kDiffMatrix12Norm = 68.1344607378673;

}  // namespace levinquad
