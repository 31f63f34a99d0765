#include <iostream>

#include "yamflat/cli.hpp"

int main(int argc, char** argv) { return yamflat::run_cli(argc, argv, std::cout, std::cerr); }
