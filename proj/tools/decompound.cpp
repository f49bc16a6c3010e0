#include <iostream>

#include "decompound/cli.hpp"

int main(int argc, char** argv) {
  return decompound::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
