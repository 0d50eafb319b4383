#include <iostream>

#include "spherefrac/cli.hpp"

int main(int argc, char** argv) { return spherefrac::cli::run(argc, argv, std::cout, std::cerr); }
