#include <iostream>

#include "icopt/cli.hpp"

int main(int argc, char** argv) { return icopt::cli::run(argc, argv, std::cout, std::cerr); }
