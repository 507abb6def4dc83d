#include <iostream>
#include <string>
#include <vector>

#include "hierevo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return hierevo::cli::run(args, std::cout, std::cerr);
}
