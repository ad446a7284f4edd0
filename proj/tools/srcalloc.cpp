#include <iostream>

#include "srcalloc/cli.hpp"

int main(int argc, char** argv) {
  return srcalloc::run_cli(argc, argv, std::cout, std::cerr);
}
