#include <iostream>
#include <string>
#include <vector>

#include "rxfeat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rxfeat::dispatch(args, std::cout, std::cerr);
}
