#ifndef CPINV_CLI_HPP
#define CPINV_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "cpinv/report.hpp"

namespace cpinv {

enum ExitCode : int
{
    kExitOk = 0,
    kExitValidation = 2,
    kExitInternal = 3,
};

struct CommandOutcome
{
    int exit_code = kExitOk;
    std::optional<ReportDocument> report;
    Json json;          // report->to_json(), when a report was produced
    std::string text;   // table or help text for stdout
    std::string error;  // message for stderr
};

/**
 * Runs one subcommand (ktheory, hp, grading, compare, simulate). `args`
 * excludes the program name. Writes the --json and --csv files when asked;
 * everything else is returned to the caller.
 */
CommandOutcome run_command(const std::vector<std::string>& args);

} // namespace cpinv

#endif
