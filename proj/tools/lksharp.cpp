#include <vector>
#include <string>

#include "lk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lk::cli::run(args);
}
