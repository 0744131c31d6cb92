#include <iostream>
#include <string>
#include <vector>

#include "cvqkd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cvqkd::cli::run(args, std::cout, std::cerr);
}
