#include <iostream>
#include <string>
#include <vector>

#include "qnrlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qnrlab::cli::dispatch(args, std::cout, std::cerr);
}
