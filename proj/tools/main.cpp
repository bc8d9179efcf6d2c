#include <iostream>

#include "orthcert/cli.hpp"

int main(int argc, char** argv) {
  return orthcert::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
