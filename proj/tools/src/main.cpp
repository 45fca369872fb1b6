#include <iostream>
#include <string>
#include <vector>

#include "sdpkit_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sdpkit::cli::run(args, std::cin, std::cout, std::cerr);
}
