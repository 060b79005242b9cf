#include <iostream>

#include "ljet/cli.hpp"

int main(int argc, char** argv) { return ljet::run_cli(argc, argv, std::cout, std::cerr); }
