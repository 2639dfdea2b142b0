#include <iostream>
#include <string>
#include <vector>

#include "geokalman/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return geokalman::cli::run_main(args, std::cout, std::cerr);
}
