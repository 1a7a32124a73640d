#include <iostream>

#include "vote_diffuse/cli.hpp"

int main(int argc, char** argv) {
  return vote_diffuse::cli::main(argc, argv, std::cout, std::cerr);
}
