#ifndef SMTLAB_TOOLS_CLI_HPP
#define SMTLAB_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace smtlab::cli
{

inline constexpr int exit_pass = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_flagged = 2;

// Parses the command line and runs one subcommand. Reports go to --out-dir;
// the text summary goes to `out` and errors to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace smtlab::cli

#endif
