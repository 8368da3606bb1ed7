#include "cayley/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cayley::cli::run(argc, argv, std::cout, std::cerr); }
