#include <iostream>

#include "fraghmm/cli.hpp"

int main(int argc, char** argv) {
    return fraghmm::cli_main(argc, argv, std::cout, std::cerr);
}
