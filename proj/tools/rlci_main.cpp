#include <iostream>

#include "rlci/cli.hpp"

int main(int argc, char** argv) { return rlci::cli::run(argc, argv, std::cout, std::cerr); }
