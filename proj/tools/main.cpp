#include <iostream>

#include "powernet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return powernet::cli::run(args, std::cout, std::cerr);
}
