#include <iostream>
#include <string>
#include <vector>

#include "aevplan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aevplan::dispatch(args, std::cout, std::cerr);
}
