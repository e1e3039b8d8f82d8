#pragma once

#include <string>
#include <vector>

namespace qpdnls {

// Entry point used by both the binary and the in-process tests.
// Exit codes: 0 all checks passed, 1 an enabled assertion failed,
// 2 bad config or usage, 3 an enumeration budget was exceeded.
int run_cli(const std::vector<std::string>& args);

} // namespace qpdnls
