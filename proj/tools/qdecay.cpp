#include <iostream>

#include "qdecay/cli/command.hpp"

int main(int argc, char** argv) {
  return qdecay::cli::cli_main(argc, argv, std::cout, std::cerr);
}
