#include <iostream>
#include <string>
#include <vector>

#include "modalctl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return modalctl::cli::run(args, std::cout, std::cerr);
}
