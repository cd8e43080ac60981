#include <iostream>

#include "mcid/cli.hpp"

int main(int argc, char** argv) { return mcid::run_cli(argc, argv, std::cout, std::cerr); }
