#pragma once

// The levinq command line: integrate, sweep, compare, selftest.
//
// Exit codes: 0 success, 1 a result did not converge or a check failed,
// 2 bad flags or unparsable input.

#include <ostream>
#include <string>
#include <vector>

namespace levinquad {

/// args excludes the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levinquad
