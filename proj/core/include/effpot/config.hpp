#pragma once

#include <string>
#include <vector>

#include "effpot/effective.hpp"
#include "effpot/potential.hpp"
#include "effpot/sft.hpp"

namespace effpot {

/// Validated run configuration. Defaults: tol 1e-10, max_iter 1e5,
/// base word lexicographically first, beta grid 2^0..2^12, Lambda 0.5.
struct RunConfig {
  SubshiftSpec spec;
  PairPotential potential;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  Word base_word;  // depth = potential.y_depth
  bool accel = false;
  std::vector<double> beta_grid;
  std::string out_dir = ".";
  std::vector<std::string> formats{"json", "csv"};

  SolveOptions solve_options() const {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.accel = accel;
    return opts;
  }
};

/// Parses and validates a JSON config. Unknown keys are rejected; errors
/// carry the offending field path.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Expands a builtin potential family (zero, x_only, y_only, diagonal, sum)
/// into its table form.
PairPotential builtin_potential(const SubshiftSpec& spec,
                                const std::string& name,
                                const std::vector<double>& x_values,
                                const std::vector<double>& y_values,
                                double eps, bool masked);

/// Canonical JSON dump of the config (sorted keys) used for hashing.
std::string canonical_config(const RunConfig& config);

}  // namespace effpot
