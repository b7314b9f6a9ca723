#include <iostream>
#include <string>
#include <vector>

#include "d4census/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return d4::cli::run_cli(args, std::cout, std::cerr);
}
