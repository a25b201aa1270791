#include <iostream>

#include "pfl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pfl::run(args, std::cout, std::cerr);
}
