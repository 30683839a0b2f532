#include <iostream>

#include "mtl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mtl::dispatch(args, std::cout, std::cerr);
}
