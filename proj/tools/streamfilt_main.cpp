#include <iostream>
#include <string>
#include <vector>

#include "streamfilt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return streamfilt::cli::run(args, std::cout, std::cerr);
}
