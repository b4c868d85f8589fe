#include <string>
#include <vector>

#include "gridner/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gridner::cli::run(args);
}
