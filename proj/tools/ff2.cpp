#include <iostream>

#include "ff2/cli.hpp"

int main(int argc, char** argv) { return ff2::cli::run(argc, argv, std::cout, std::cerr); }
