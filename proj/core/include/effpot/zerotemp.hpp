#pragma once

#include <vector>

#include "effpot/effective.hpp"
#include "effpot/potential.hpp"
#include "effpot/transship.hpp"

namespace effpot {

/// One point of the inverse-temperature sweep: the fixed point of the
/// scaled observable beta * A, reported in 1/beta units.
struct SweepRow {
  double beta = 0.0;
  double lambda_over_beta = 0.0;
  XPotential phi_over_beta;  // normalized at the base word
  double lip_phi_over_beta = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Solves the fixed point for beta * A at every grid value. Rows are
/// emitted even when a solve fails to converge; the sweep never aborts.
std::vector<SweepRow> beta_sweep(const SubshiftSpec& spec,
                                 const PairPotential& a,
                                 const std::vector<double>& grid,
                                 const Word& base_word,
                                 const SolveOptions& opts = {});

std::vector<double> default_beta_grid();  // powers of 2, 2^0 .. 2^12

/// Least-squares fit lambda/beta ~ c + b/beta over the largest decade of
/// converged betas; returns c. Throws InsufficientRows below 3 rows.
double extrapolate_c(const std::vector<SweepRow>& rows);

/// Zero-temperature effective operator: Q(phi)(w) is the maximum mean cycle
/// of the node weights A(w,.) (masked) + phi over the block graph at the
/// working depth. Monotone and additively homogeneous.
XPotential maxplus_G(const SubshiftSpec& spec, const PairPotential& a,
                     const XPotential& phi);

struct ZeroTempResult {
  double c_extrapolated = 0.0;
  bool has_extrapolated = false;
  double c_maxplus = 0.0;
  XPotential v;  // normalized V(w0) = 0; one additive eigenfunction among
                 // possibly many
  double eigen_residual = 0.0;  // ||Q(V) - V - c||_0
  bool converged = false;
  std::size_t iterations = 0;
  Word base_word;
};

/// Relative value iteration V <- Q(V) - Q(V)(w0) from V0 = 0 (or a caller
/// iterate), with cycle-averaging on oscillation and a Cesaro growth-rate
/// fallback for c. Non-convergence of V is a flagged state, never an error;
/// the fallback c is still returned.
ZeroTempResult additive_eigen(
    const SubshiftSpec& spec, const PairPotential& a, const Word& base_word,
    double tol = 1e-10, std::size_t max_iter = 10000,
    const std::optional<XPotential>& v0 = std::nullopt);

/// Sweep + extrapolation + additive eigenpair in one call.
struct ZeroTempBundle {
  std::vector<SweepRow> rows;
  ZeroTempResult result;
};

ZeroTempBundle run_zero_temperature(const SubshiftSpec& spec,
                                    const PairPotential& a,
                                    const std::vector<double>& grid,
                                    const Word& base_word,
                                    const SolveOptions& opts = {},
                                    double eigen_tol = 1e-10,
                                    std::size_t eigen_max_iter = 10000);

}  // namespace effpot
