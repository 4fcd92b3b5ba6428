#include <iostream>

#include "boussinesq/cli.hpp"

int main(int argc, char** argv) { return bouss::run_cli(argc, argv, std::cout, std::cerr); }
