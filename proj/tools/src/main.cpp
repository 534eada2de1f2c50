#include <iostream>

#include "lwtool/commands.hpp"

int main(int argc, char** argv) { return lwtool::run_cli(argc, argv, std::cout, std::cerr); }
