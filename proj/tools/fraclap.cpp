#include <iostream>

#include "fraclap/cli.hpp"

int main(int argc, char** argv) { return fraclap::run_cli(argc, argv, std::cout, std::cerr); }
