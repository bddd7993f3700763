#include <iostream>
#include <string>
#include <vector>

#include "zeta1d/report.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return zeta1d::run(args, std::cout, std::cerr);
}
