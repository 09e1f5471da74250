#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  arm::cli::apply_thread_env();
  std::vector<std::string> args(argv + 1, argv + argc);
  return arm::cli::run(args, std::cout, std::cerr);
}
