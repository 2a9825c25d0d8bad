#include <iostream>

#include "secam/cli.hpp"

int main(int argc, char** argv) {
    return secam::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
