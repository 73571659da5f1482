#include <iostream>
#include <string>
#include <vector>

#include "dialogaug/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dialogaug::cli::run(args, std::cout, std::cerr);
}
