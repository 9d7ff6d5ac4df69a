#include <iostream>

#include "fsp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fsp::cli::dispatch(args, std::cout, std::cerr);
}
