#include <iostream>

#include "kgcohort/cli.hpp"

int main(int argc, char** argv) {
  return kgcohort::cli::run(argc, argv, std::cout, std::cerr);
}
