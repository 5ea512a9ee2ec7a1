#include <iostream>

#include "tissue/harness.hpp"

int main(int argc, char** argv) { return tissue::run_cli(argc, argv, std::cout, std::cerr); }
