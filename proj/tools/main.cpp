#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string out, err;
  int code = bianchi::cli::run(args, out, err);
  std::cout << out;
  std::cerr << err;
  return code;
}
