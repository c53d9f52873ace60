#include <iostream>

#include "chf/cli.hpp"

int main(int argc, char** argv) { return chf::cli::main_entry(argc, argv, std::cout, std::cerr); }
