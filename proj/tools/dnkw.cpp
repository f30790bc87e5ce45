#include <iostream>

#include <dnkw/cli.hpp>

int main(int argc, char **argv)
{
    return dnkw::run_cli(argc, argv, std::cout, std::cerr);
}
