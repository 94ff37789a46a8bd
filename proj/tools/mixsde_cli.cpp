#include <iostream>

#include "mixsde/cli.hpp"

int main(int argc, char** argv) { return mixsde::run_cli(argc, argv, std::cout, std::cerr); }
