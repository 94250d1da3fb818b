#include <iostream>

#include "qcomm/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return qcomm::cli::runCli(args, std::cout, std::cerr, qcomm::cli::processEnvironment());
}
