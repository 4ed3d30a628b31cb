#include <iostream>
#include <string>
#include <vector>

#include "khspell/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return khspell::cli::run(std::move(args), std::cin, std::cout, std::cerr);
}
