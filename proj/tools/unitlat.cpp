#include <iostream>

#include "unitlat/cli.hpp"

int main(int argc, char** argv) { return unitlat::run_cli(argc, argv, std::cout, std::cerr); }
