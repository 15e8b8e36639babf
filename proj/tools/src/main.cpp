#include <iostream>

#include "disclose_cli/cli.hpp"

int main(int argc, char** argv) { return disclose::cli::run(argc, argv, std::cout, std::cerr); }
