#include <iostream>
#include <string>
#include <vector>

#include "xormaps/cli_reporting.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return xormaps::cli_reporting::cmd_dispatch(args, std::cout, std::cerr);
}
