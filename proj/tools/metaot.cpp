#include "metaot/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return metaot::cli::cli_main(argc, argv, std::cout, std::cerr);
}
