#include <iostream>

#include "zlab/cli.hpp"

int main(int argc, char** argv) {
  return zlab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
