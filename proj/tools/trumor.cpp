#include <iostream>
#include <string>
#include <vector>

#include "trumor/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return trumor::app::run_cli(args, std::cout, std::cerr);
}
