#include <iostream>
#include <string>
#include <vector>

#include "inkforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return inkforge::cli::run(args, std::cout, std::cerr);
}
