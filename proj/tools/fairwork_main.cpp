#include <iostream>

#include "fairwork/cli.hpp"

int main(int argc, char** argv) { return fairwork::cli::run(argc, argv, std::cout, std::cerr); }
