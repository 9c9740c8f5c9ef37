#include <iostream>
#include <string>
#include <vector>

#include "visenrich/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return visenrich::run_cli(args, std::cout, std::cerr);
}
