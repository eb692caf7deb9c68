#include <iostream>
#include <string>
#include <vector>

#include "gptt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gptt::run_cli(args, std::cout, std::cerr);
}
