#include <iostream>
#include <vector>

#include "mcstat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mcstat::run_cli(args, std::cout, std::cerr);
}
