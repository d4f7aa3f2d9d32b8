#include <iostream>

#include "smce/cli.hpp"

int main(int argc, char** argv) { return smce::run_cli(argc, argv, std::cout, std::cerr); }
