#include <iostream>

#include "tensorval/cli.hpp"

int main(int argc, char** argv) { return tensorval::run_cli(argc, argv, std::cout, std::cerr); }
