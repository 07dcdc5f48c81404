#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rzchart {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDomain = 2;

// Entry point of the rzchart command line. args excludes the program name.
// Returns 0 on success, 1 on validation or usage errors, 2 on domain or
// numerical errors; diagnostics go to err as a single line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rzchart
