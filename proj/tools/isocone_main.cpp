#include <iostream>
#include <string>
#include <vector>

#include "isocone/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return isocone::run_cli(args, std::cout, std::cerr);
}
