#ifndef PDMARK_CLI_HPP
#define PDMARK_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace pdmark::cli {

constexpr const char* kToolName = "pdmark";
constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success / boolean true, 1 checked property false or verdict
/// not ok, 2 usage or input error, 3 resource bound hit.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pdmark::cli

#endif
