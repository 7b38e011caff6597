#ifndef LRDUSTAT_TOOLS_CLI_HPP
#define LRDUSTAT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lrdustat::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name).
/// Returns 0 on success, 1 on internal or numeric failure, 2 on user error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Parses "0.9,0.95,0.99" into levels in (0,1).
std::vector<double> parse_levels(const std::string& text);

/// Parses "512,1024" into sizes.
std::vector<long long> parse_sizes(const std::string& text);

}  // namespace lrdustat::tools

#endif  // LRDUSTAT_TOOLS_CLI_HPP
