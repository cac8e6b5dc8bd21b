#include <iostream>

#include "fphi/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fphi::run_cli(args, std::cout, std::cerr);
}
