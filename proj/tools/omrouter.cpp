#include <iostream>

#include "omrouter/cli/commands.hpp"
#include "omrouter/cli/config.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return omrouter::cli::run_cli(args, std::cout, std::cerr, omrouter::cli::process_environment());
}
