#include <iostream>

#include "afne/cli.hpp"

int main(int argc, char** argv) { return afne::cli::run(argc, argv, std::cout, std::cerr); }
