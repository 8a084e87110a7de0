#include <iostream>
#include <string>
#include <vector>

#include "skw/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return skw::cli::run(args, std::cout, std::cerr);
}
