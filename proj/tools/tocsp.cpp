#include <iostream>

#include "tocsp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tocsp::run(args, std::cout, std::cerr);
}
