#include "jetex/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return jetex::cli::run(argc, argv, std::cout, std::cerr); }
