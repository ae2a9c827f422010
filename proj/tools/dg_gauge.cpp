#include <iostream>
#include <string>
#include <vector>

#include "dgg/cli_io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dgg::cli_dispatch(std::move(args), std::cout, std::cerr);
}
