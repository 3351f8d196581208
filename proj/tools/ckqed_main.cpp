#include <iostream>
#include <string>
#include <vector>

#include "ckqed/cli_runner.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ckqed::cli::run_main(args, std::cout, std::cerr);
}
