#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kato::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Highest scheme order accepted on the command line.
inline constexpr int kMaxCliOrder = 4;

// Pass thresholds of the `verify` subcommand.
inline constexpr double kProp1Threshold = 1e-7;
inline constexpr double kPpropExactThreshold = 1e-9;
inline constexpr double kPpropFdThreshold = 1e-6;
inline constexpr int kVerifySamples = 32;
inline constexpr int kVerifyStepsPerEdge = 1;
inline constexpr int kStudyStepsPerEdge = 16;

/// Runs the tool on `args` (without the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kato::cli
