#include <iostream>

#include "spanmine/cli.hpp"

int main(int argc, char** argv) { return spanmine::run_cli(argc, argv, std::cout, std::cerr); }
