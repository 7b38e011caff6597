#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lrdustat::tools::run_cli(argc, argv, std::cout, std::cerr); }
