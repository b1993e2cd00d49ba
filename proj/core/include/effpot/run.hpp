#pragma once

#include <optional>
#include <string>

#include "effpot/config.hpp"

namespace effpot {

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<int> depth;  // working x-depth for pressure/equilibrium
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNoConvergence = 2;

/// Dispatches a subcommand, writes its artifacts (JSON/CSV plus
/// manifest.json) under the output directory and returns the exit code.
/// Numerical non-convergence yields exit code 2 with flagged artifacts
/// still written; configuration and assertion failures yield exit code 1
/// with a machine-readable error body.
int run(const std::string& subcommand, RunConfig config,
        const RunOverrides& overrides = {});

/// Known subcommands, in dispatch order.
const std::vector<std::string>& subcommands();

}  // namespace effpot
