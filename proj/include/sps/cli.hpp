#ifndef SPS_CLI_HPP
#define SPS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sps {

/// Exit codes of cli_main.
enum ExitCode : int { kExitOk = 0, kExitFalse = 1, kExitUsage = 2, kExitViolation = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// out, human-readable summaries and errors to err.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& s);

}  // namespace sps

#endif  // SPS_CLI_HPP
