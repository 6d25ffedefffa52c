#include <iostream>
#include <string>
#include <vector>

#include "adaptive_gallery/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return adaptive_gallery::cli::run(args, std::cout, std::cerr);
}
