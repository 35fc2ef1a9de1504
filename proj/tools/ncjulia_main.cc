#include <iostream>
#include <string>
#include <vector>

#include "ncjulia/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ncjulia::RunCli(args, std::cout, std::cerr);
}
