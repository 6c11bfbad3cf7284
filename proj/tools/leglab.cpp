#include <iostream>

#include "leglab/cli.hpp"

int main(int argc, char** argv) {
  return leglab::run_command(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
