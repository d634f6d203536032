#include "qpoisson/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return qpoisson::cli::run(argc, argv, std::cout, std::cerr);
}
