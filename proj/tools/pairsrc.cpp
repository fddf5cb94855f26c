#include <iostream>

#include "pairsrc/cli.hpp"

int main(int argc, char** argv) { return pairsrc::cli::run(argc, argv, std::cout, std::cerr); }
