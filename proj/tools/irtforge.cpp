#include <iostream>
#include <string>
#include <vector>

#include "irtforge/cli.hpp"

int main(int argc, char** argv) {
    return irtforge::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
