#ifndef LK_SELFTEST_HPP
#define LK_SELFTEST_HPP

#include <string>
#include <vector>

namespace lk::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full oracle suite (one entry per criterion); shared by the
/// `selftest` subcommand and the acceptance binary.
std::vector<CriterionResult> run_all();

}  // namespace lk::selftest

#endif
