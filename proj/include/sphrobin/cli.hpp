#pragma once

// Batch front-end. Subcommands: ball-eig, verify-thm1, verify-thm2, profile,
// steiner-check, af-check, hyp-witness, mesh. A JSON config with a `command`
// field may supply any long option; flags on the command line override it.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 input or
// geometry error.

#include <iosfwd>
#include <string>
#include <vector>

namespace sphrobin::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a Robin parameter: a number or `tan(<number>)`.
double parse_beta(const std::string& text);

}  // namespace sphrobin::cli
