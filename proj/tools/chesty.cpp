#include <iostream>

#include "chesty/pipeline.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chesty::run_cli(args, std::cout, std::cerr);
}
