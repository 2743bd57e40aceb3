#include <iostream>

#include "pcwf/cli.hpp"

int main(int argc, char** argv) { return pcwf::cli::run(argc, argv, std::cout, std::cerr); }
