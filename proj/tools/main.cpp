#include <iostream>

#include "flexibo/cli.hpp"

int main(int argc, char** argv) { return flexibo::run_cli(argc, argv, std::cout, std::cerr); }
