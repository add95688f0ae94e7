#include <iostream>

#include "cpinv/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    const cpinv::CommandOutcome outcome = cpinv::run_command(args);
    if (!outcome.text.empty())
        std::cout << outcome.text;
    if (!outcome.error.empty())
        std::cerr << "cpinv: " << outcome.error << "\n";
    return outcome.exit_code;
}
