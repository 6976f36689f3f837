#include <iostream>

#include "guegap/cli.hpp"

int main(int argc, char** argv) { return guegap::run_cli(argc, argv, std::cout, std::cerr); }
