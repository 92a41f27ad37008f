#include <iostream>
#include <string>
#include <vector>

#include "structemb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return structemb::cli_dispatch(args, std::cout, std::cerr);
}
