#ifndef CSLAB_CLI_HPP
#define CSLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cslab {

inline constexpr const char* kVersion = "0.1.0";

// Exit statuses of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1; // validation, domain and usage errors
inline constexpr int kExitIo = 2;
inline constexpr int kExitNoConvergence = 3;

/// Runs one command line (without the program name). A summary goes to `out`,
/// diagnostics to `err`.
///
///   bound --theorem NAME | --tail NAME | --covering  [parameters]
///   certify --matrix FILE --support i,j,... --signs +,-,...
///   solve --matrix FILE --rhs FILE [--output FILE]
///   mc recovery|phase|smin|sumtail|concentration|gram [options]
///
/// `--config FILE` reads key=value lines as if they were given as --key value
/// before the command-line flags, which take precedence.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cslab

#endif
