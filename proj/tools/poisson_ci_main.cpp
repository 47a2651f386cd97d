#include "poisson_ci/report.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return poisson_ci::run_cli(argc, argv, std::cout, std::cerr);
}
