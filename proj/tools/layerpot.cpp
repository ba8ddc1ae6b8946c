#include <iostream>
#include <string>
#include <vector>

#include "layerpot/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return layerpot::run_cli(args, std::cout, std::cerr);
}
