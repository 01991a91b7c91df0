#include <iostream>

#include "onsager/cli.hpp"

int main(int argc, char** argv) {
    return onsager::run_cli(argc, argv, std::cout, std::cerr);
}
