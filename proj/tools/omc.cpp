#include <iostream>
#include <string>
#include <vector>

#include "omc/cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return omc::cli::run(args, std::cout, std::cerr);
}
