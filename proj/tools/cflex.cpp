#include <iostream>
#include <string>
#include <vector>

#include "cflex/pipeline.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cflex::run_cli(args, std::cout, std::cerr);
}
