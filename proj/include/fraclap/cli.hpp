#pragma once

// The `fraclap` command line: rates, simulate, fit and verify.

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclap/spectra.hpp"

namespace fraclap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification or fit failure, numerical error
inline constexpr int kExitConfig = 2;   // bad flags or parameters

/// Parses "gaussian:w[,amp]", "annulus:r0,r1[,s]", "power_tail:order,cutoff",
/// "table:path" or "zero". Throws ConfigError.
RadialProfile parse_profile(const std::string& text, int n);

/// args[0] is the program name. Output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraclap
