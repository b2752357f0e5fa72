#include "pitchlog/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return pitchlog::run_cli(argc, argv, std::cout, std::cerr);
}
