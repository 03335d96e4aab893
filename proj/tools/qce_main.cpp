#include <iostream>
#include <string>
#include <vector>

#include "qce/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qce::cli_main(args, std::cout, std::cerr);
}
