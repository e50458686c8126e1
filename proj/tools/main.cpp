#include <iostream>

#include "viscoswell/cli.hpp"

int main(int argc, char** argv) {
  return viscoswell::cli::run_cli(argc, argv, std::cout, std::cerr);
}
