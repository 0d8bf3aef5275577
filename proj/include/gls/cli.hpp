#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitUsage = 64;

/// Runs one command line (without the program name). Reports go to `out`
/// (or to --out), diagnostics to `err`. Returns the process exit status:
/// 0 success, 1 computational failure, 2 precondition violation, 64 usage
/// error (unknown subcommand or flag).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gls::cli
