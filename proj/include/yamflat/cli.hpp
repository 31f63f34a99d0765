#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace yamflat {

/// Exit codes: 0 success, 1 negative verdict, 2 validation failure,
/// 3 undecidable comparison, 4 grid too coarse or budget exhausted.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience wrapper; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace yamflat
