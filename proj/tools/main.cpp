#include "asdefect/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return asdefect::cli::run(argc, argv, std::cout, std::cerr); }
