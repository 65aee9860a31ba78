#include <iostream>

#include "coso/cli.hpp"

int main(int argc, char** argv) {
  return coso::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
