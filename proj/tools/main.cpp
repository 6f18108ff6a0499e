#include <iostream>

#include "blockshift/cli.hpp"

int main(int argc, char** argv) {
    return blockshift::run_cli(argc, argv, std::cout, std::cerr);
}
