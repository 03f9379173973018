#include <iostream>

#include "ade/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ade::run_cli(args, std::cout);
}
