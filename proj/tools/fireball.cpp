#include <iostream>

#include "fireball/cli.hpp"

int main(int argc, char** argv) { return fireball::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
