#include <iostream>

#include "macposet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return macposet::run_command(args, std::cout, std::cerr);
}
