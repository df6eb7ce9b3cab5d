#include <iostream>

#include "nucad/frontend.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nucad::run_cli(args, std::cout, std::cerr);
}
