#include <iostream>

#include "loancost/app/cli.hpp"

int main(int argc, char** argv) { return loancost::app::run_cli(argc, argv, std::cout, std::cerr); }
