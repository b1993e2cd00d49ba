#pragma once

#include <cstddef>
#include <vector>

#include "effpot/potential.hpp"
#include "effpot/sft.hpp"

namespace effpot {

/// Weighted shift-successor matrix L(w, w') = exp(psi(w)) on block-graph
/// edges (weight at the source word) and 0 elsewhere. Weights are kept in
/// log domain so that arbitrarily large potentials stay representable.
struct TransferMatrix {
  int depth = 0;
  BlockGraph graph;
  std::vector<double> log_weight;  // psi(w) per source word
};

TransferMatrix transfer_matrix(const SubshiftSpec& spec, const XPotential& psi);

/// Topological pressure data: log Perron root with both eigenvectors.
/// Eigenvectors are max-normalized; `right_log`/`left_log` are the exact
/// log-domain representations and stay meaningful even when the linear
/// entries underflow at large potentials.
struct PressureResult {
  double pressure = 0.0;
  std::vector<double> right_vec;
  std::vector<double> left_vec;
  std::vector<double> right_log;
  std::vector<double> left_log;
  std::size_t iterations = 0;
  double residual = 0.0;
};

inline constexpr std::size_t kDefaultMaxIter = 100000;

/// Log Perron root of the weighted block matrix by log-domain power
/// iteration (all-ones start, max renormalization, eigenvalue-residual
/// stopping rule). Throws NoConvergence carrying the last residual.
PressureResult pressure(const SubshiftSpec& spec, const XPotential& psi,
                        double tol = 1e-13,
                        std::size_t max_iter = kDefaultMaxIter);

/// Stationary Markov measure on depth-k words: pi stationary for the
/// row-stochastic kernel P supported on block-graph edges.
struct MarkovMeasure {
  int depth = 0;
  std::vector<double> pi;
  std::vector<std::vector<double>> p;  // aligned to BlockGraph::succ
};

/// Unique equilibrium state of psi: P(w,w') = L(w,w') h(w') / (e^P h(w)).
MarkovMeasure equilibrium(const SubshiftSpec& spec, const XPotential& psi,
                          double tol = 1e-13,
                          std::size_t max_iter = kDefaultMaxIter);

/// Kolmogorov-Sinai entropy rate -sum pi P log P, with 0 log 0 = 0.
double ks_entropy(const SubshiftSpec& spec, const MarkovMeasure& mu);

/// Integral of a locally constant f of depth <= depth(mu)+1 against mu.
double integrate(const SubshiftSpec& spec, const MarkovMeasure& mu,
                 const XPotential& f);

struct GibbsProfileRow {
  int depth = 0;
  double min_quotient = 0.0;
  double max_quotient = 0.0;
};

/// Per-depth extremes of mu(cylinder) / exp(S_n psi - n * pressure) over all
/// allowed depth-n cylinders, n in [k+1, n_max]. S_n psi sums psi over all
/// depth-k blocks of the word. For finite-range psi the profile is constant
/// in n: the testable form of the Gibbs property.
std::vector<GibbsProfileRow> gibbs_quotient_profile(
    const SubshiftSpec& spec, const XPotential& psi, const MarkovMeasure& mu,
    int n_max, std::size_t word_cap = kDefaultWordCap);

}  // namespace effpot
