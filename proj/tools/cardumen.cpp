#include <iostream>
#include <string>
#include <vector>

#include "cardumen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cardumen::cli::run(args, std::cout, std::cerr);
}
