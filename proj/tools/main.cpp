#include "fermat/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fermat::cli::run(argc, argv, std::cout, std::cerr); }
