#include <iostream>

#include "cmgn/cli.hpp"

int main(int argc, char** argv) {
  return cmgn::cli::run(argc, argv, std::cout, std::cerr);
}
