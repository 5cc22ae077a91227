#include <iostream>

#include "relaycap/cli.hpp"

int main(int argc, char** argv)
{
    return relaycap::run_cli(argc, argv, std::cout, std::cerr);
}
