#include <iostream>

#include "bergerflow/cli.hpp"

int main(int argc, char** argv) {
  return bergerflow::run_cli(argc, argv, std::cout, std::cerr);
}
