#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace infinitesimal::cli {

enum class OutputFormat { Text, Json, Csv, Svg };

struct RunConfig {
  int order = 12;
  double tolerance = 1e-9;
  /// Tolerance for the sequence scans (limit, strip, continuity, onesided).
  double sequence_tolerance = 1e-3;
  std::int64_t horizon = 1'000'000;
  OutputFormat format = OutputFormat::Text;
  std::uint64_t seed = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitMath = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infinitesimal::cli
