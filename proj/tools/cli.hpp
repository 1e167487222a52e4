#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ffnet::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kNonIdeal = 1, kFailure = 1, kError = 2 };

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless an output file is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a layer-size set such as "20,50:60:5": integers and inclusive ranges a:b[:step].
std::vector<std::size_t> parse_size_set(const std::string& text);

} // namespace ffnet::cli
