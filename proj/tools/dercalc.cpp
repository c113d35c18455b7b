#include "dercalc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto out = dercalc::cli::run(args);
    std::cout << out.text;
    return out.code;
}
