#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return spinpulse::cli::run_cli(argc, argv, std::cout, std::cerr);
}
