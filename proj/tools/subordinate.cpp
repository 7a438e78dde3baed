#include <iostream>
#include <string>
#include <vector>

#include "subordinate/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return subordinate::cli::run(args, std::cout, std::cerr);
}
