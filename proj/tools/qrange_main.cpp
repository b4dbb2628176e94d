#include "qrange/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return qrange::cli::run(argc, argv, std::cout, std::cerr); }
