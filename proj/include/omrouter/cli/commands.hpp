#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace omrouter::cli {

enum ExitCode
{
    Success = 0,
    PhysicsFailure = 1,
    ConfigFailure = 2
};

/// Full command-line entry point. `args` excludes the program name; `env`
/// supplies the OMROUTER_* layer.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const std::map<std::string, std::string> &env = {});

} // namespace omrouter::cli
