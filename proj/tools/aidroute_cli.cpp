#include <iostream>
#include <string>
#include <vector>

#include "aidroute/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aidroute::run_cli(args, std::cout, std::cerr);
}
