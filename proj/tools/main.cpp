#include <iostream>

#include "dyncausal/cli.hpp"

int main(int argc, char** argv) { return dyncausal::run_cli(argc, argv, std::cout, std::cerr); }
