#include <iostream>
#include <string>
#include <vector>

#include "levinquad/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return levinquad::run_cli(args, std::cout, std::cerr);
}
