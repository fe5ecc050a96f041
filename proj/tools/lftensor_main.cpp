#include <iostream>

#include "lftensor/cli.hpp"

int main(int argc, char** argv) { return lftensor::cli::run(argc, argv, std::cout, std::cerr); }
