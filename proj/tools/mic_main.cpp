#include <iostream>

#include "mic/cli.hpp"

int main(int argc, char** argv) { return mic::run_cli(argc, argv, std::cout, std::cerr); }
