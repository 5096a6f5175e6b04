#include <iostream>

#include "signbal/cli.hpp"

int main(int argc, char** argv) {
  return signbal::run_cli(argc, argv, std::cout, std::cerr);
}
