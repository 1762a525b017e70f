#ifndef LK_CLI_HPP
#define LK_CLI_HPP

#include <string>
#include <vector>

namespace lk::cli {

/// Exit codes: 0 ok, 2 bad arguments, 3 numerical failure, 4 selftest failure.
int run(const std::vector<std::string>& args);

}  // namespace lk::cli

#endif
