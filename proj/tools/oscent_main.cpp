#include <iostream>

#include "oscent/cli/commands.hpp"

int main(int argc, char** argv) { return oscent::cli::run(argc, argv, std::cout, std::cerr); }
