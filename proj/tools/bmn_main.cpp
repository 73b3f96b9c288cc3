#include <exception>
#include <iostream>

#include "bmn/cli.hpp"

int main(int argc, char** argv) {
    try {
        return bmn::run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 3;
    }
}
