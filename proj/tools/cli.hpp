#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncilab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// `args` excludes the program name. Reports go to `out` (or to --output),
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncilab::cli
