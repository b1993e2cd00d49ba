#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "effpot/potential.hpp"
#include "effpot/sft.hpp"

namespace effpot {

/// Plain weighted digraph for cycle computations.
struct WeightedDigraph {
  std::size_t node_count = 0;
  // succ[v] = ascending (target, weight) pairs
  std::vector<std::vector<std::pair<std::size_t, double>>> succ;
};

struct MaxMeanCycleResult {
  double value = 0.0;
  std::vector<std::size_t> cycle;  // simple cycle, no repeated closing node
  std::size_t length = 0;
};

/// Exact maximum mean cycle via Karp's recurrence. The witness cycle is
/// deterministic: shortest optimal cycle, then lexicographically smallest
/// node sequence (canonical rotation starts at the smallest node).
/// The returned value is the arithmetic mean of the extracted cycle.
MaxMeanCycleResult karp_max_mean_cycle(const WeightedDigraph& g);

/// Block graph with node weights psi pushed onto out-edges of the source.
WeightedDigraph node_weight_digraph(const BlockGraph& g,
                                    const std::vector<double>& node_weight);

/// A calibrated sub-action for the node potential psi with max mean cycle c:
/// psi(w) + U(w) - U(w') <= c on every block-graph edge, tight on the
/// optimal cycle. Produced by Lax-Oleinik value iteration with a
/// cycle-averaging fallback when the iteration is periodic.
struct SubAction {
  XPotential u;  // normalized U(w0) = 0
  double calibration_residual = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> equality_set;
  bool converged = false;
};

SubAction calibrated_subaction(const SubshiftSpec& spec, const XPotential& psi,
                               double c, const Word& base_word,
                               double tol = 1e-12,
                               std::size_t max_iter = 10000);

/// Finite cost table C(y-word, extended x-word) = A + U_y(x) - U_y(sigma x),
/// over compatible pairs M(y0, x0) = 1. x-words carry one extra letter over
/// the working depth so the shift is defined.
struct CostTable {
  int y_depth = 0;
  int x_depth = 0;  // working depth + 1
  std::vector<std::vector<double>> values;       // [y ordinal][x ordinal]
  std::vector<std::vector<char>> compatible;     // M(y0, x0) mask
};

/// Sub-actions per y-word for psi_w = A(w,.) (masked) + V - V(w), all
/// calibrated against the shared constant c.
std::vector<SubAction> subactions_for(const SubshiftSpec& spec,
                                      const PairPotential& a,
                                      const XPotential& v, double c,
                                      const Word& base_word,
                                      double tol = 1e-12,
                                      std::size_t max_iter = 10000);

CostTable build_cost_table(const SubshiftSpec& spec, const PairPotential& a,
                           const XPotential& v, double c,
                           const std::vector<SubAction>& subactions);

struct TransshipmentResult {
  double kappa = 0.0;
  // support triples (y ordinal, x ordinal, mass); eta vanishes elsewhere
  std::vector<std::tuple<std::size_t, std::size_t, double>> eta;
  double marginal_gap = 0.0;  // l1 gap between the two word marginals
  std::size_t lp_iterations = 0;
};

/// Maximizes sum C.eta over probabilities on compatible pairs with equal
/// depth-m word marginals (the x marginal is projected to its depth-m
/// prefix). Dense two-phase simplex with Bland's rule.
TransshipmentResult transshipment_lp(const SubshiftSpec& spec,
                                     const CostTable& costs,
                                     double tol = 1e-12);

/// Maximum mean cycle of the cost table over the pair graph: nodes are the
/// extended x-words, edges all compatible pairs (z, z') with weight
/// C(prefix(z), z').
MaxMeanCycleResult cost_cycle_value(const SubshiftSpec& spec,
                                    const CostTable& costs);

struct SimplexResult {
  double objective = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
};

/// max c.x subject to A x = b, x >= 0 (b >= 0). Exposed for direct testing
/// against vertex enumeration.
SimplexResult solve_lp_max(std::vector<std::vector<double>> a,
                           std::vector<double> b, std::vector<double> c,
                           double tol = 1e-12);

struct TripleReport {
  double c_maxplus = 0.0;
  double kappa = 0.0;
  double cost_cycle = 0.0;
  double c_extrapolated = 0.0;
  bool has_extrapolated = false;
  bool v_converged = false;
  bool ok = false;
  std::string verdict;  // "full" or "c-only"
  TransshipmentResult transshipment;
};

struct ZeroTempResult;  // zerotemp.hpp

/// Checks the identity between the additive eigenvalue, the transshipment
/// value and the cost-table cycle value. Throws AssertionFailure carrying
/// all values when an applicable comparison fails.
TripleReport verify_triple_equality(const SubshiftSpec& spec,
                                    const PairPotential& a,
                                    const ZeroTempResult& zt,
                                    const Word& base_word,
                                    double pair_tol = 1e-9,
                                    double extrapolation_tol = 1e-3);

}  // namespace effpot
