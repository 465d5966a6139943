#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jm {

inline constexpr const char* kCliVersion = "1.0.0";

// shortest decimal text that parses back to exactly the same double
std::string format_double(double v);

// run the command-line tool in-process; args include the program name.
// exit codes: 0 success, 2 bad usage or unreadable input, 3 an iterative
// method failed to converge.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jm
