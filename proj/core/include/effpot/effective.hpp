#pragma once

#include <optional>
#include <vector>

#include "effpot/potential.hpp"
#include "effpot/transfer.hpp"

namespace effpot {

/// One application of the forward effective operator: for each allowed
/// y-word w of depth m, the topological pressure of the x-potential
/// x -> A(w, x) (mask applied) + phi(x), evaluated on the block graph at
/// depth max(x_depth(A), depth(phi)). The result is a depth-m function of y.
XPotential apply_G_plus(const SubshiftSpec& spec, const PairPotential& a,
                        const XPotential& phi, double tol = 1e-13,
                        std::size_t max_iter = kDefaultMaxIter);

/// Fixed point data of G+(phi) = phi + lambda, normalized phi(w0) = 0.
struct FixedPointResult {
  XPotential phi_plus;
  double lambda_plus = 0.0;
  double residual = 0.0;  // ||G+(phi+) - phi+ - lambda+||_0
  std::size_t iterations = 0;
  std::vector<double> contraction_trace;  // c-norm step distances
  bool converged = false;
  Word base_word;
};

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  double pressure_tol = 1e-13;
  std::size_t pressure_max_iter = kDefaultMaxIter;
  bool accel = false;  // secant-damped update; plain iteration is default
};

/// Iterates phi_{n+1} = G+(phi_n) - G+(phi_n)(w0) from phi_0 (zero unless
/// given), reporting lambda as G+(phi_n)(w0). Non-convergence is returned
/// as converged = false, never thrown.
FixedPointResult solve_fixed_point(
    const SubshiftSpec& spec, const PairPotential& a, const Word& base_word,
    const SolveOptions& opts = {},
    const std::optional<XPotential>& phi0 = std::nullopt);

/// Lexicographically first allowed y-word of the working depth.
Word default_base_word(const SubshiftSpec& spec, const PairPotential& a);

/// The equilibrium state of A(w,.) + phi+ for each y-word w, together with
/// the residual of its defining identity
/// | int (A(w,.) + phi+) dmu_w + h(mu_w) - phi+(w) - lambda+ |.
struct EffectiveFamily {
  int y_depth = 0;
  std::vector<MarkovMeasure> measures;  // aligned to the y WordTable
  std::vector<double> residuals;
};

EffectiveFamily effective_family(const SubshiftSpec& spec,
                                 const PairPotential& a,
                                 const FixedPointResult& fp,
                                 double tol = 1e-13,
                                 std::size_t max_iter = kDefaultMaxIter);

struct ContractionProbe {
  double c_dist_before = 0.0;
  double c_dist_after = 0.0;
  double sup_dist_before = 0.0;
  double sup_dist_after = 0.0;
};

/// Distances before/after one application of G+, for property testing of
/// sup-norm nonexpansiveness and strict quotient-norm contraction.
ContractionProbe contraction_probe(const SubshiftSpec& spec,
                                   const PairPotential& a,
                                   const XPotential& phi,
                                   const XPotential& psi,
                                   double tol = 1e-13);

}  // namespace effpot
