#include <iostream>
#include <string>
#include <vector>

#include "minegrid/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return minegrid::cli::run_command(args, std::cout, std::cerr);
}
