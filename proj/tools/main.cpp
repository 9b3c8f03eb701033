#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return coopcli::run(argc, argv, std::cout, std::cerr); }
