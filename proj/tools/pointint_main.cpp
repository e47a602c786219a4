#include <iostream>

#include "pointint/cli.hpp"

int main(int argc, char** argv) {
  return pointint::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
