#pragma once

#include <functional>
#include <vector>

#include "effpot/sft.hpp"

namespace effpot {

/// A locally constant observable of range `depth`: one finite real per
/// allowed depth-k word, aligned to the WordTable ordering. Evaluation on a
/// deeper word uses its depth-k prefix; shorter words are an error.
struct XPotential {
  int depth = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Lifts a depth-k potential to the depth-d table (d >= k) by prefixes.
XPotential lift_to_depth(const SubshiftSpec& spec, const XPotential& f, int d);

XPotential add(const XPotential& f, const XPotential& g);
XPotential subtract(const XPotential& f, const XPotential& g);
XPotential shift(const XPotential& f, double gamma);
XPotential scale(const XPotential& f, double factor);

/// A finite-range pair observable A(y, x) tabulated over allowed
/// (depth-m y-word, depth-n x-word) pairs. When `masked`, the effective
/// value carries the junction factor M(y0, x0): incompatible pairs read 0.
struct PairPotential {
  int y_depth = 0;
  int x_depth = 0;
  std::vector<std::vector<double>> values;  // [y ordinal][x ordinal]
  bool masked = false;

  /// Effective entry, mask applied lazily.
  double value(const SubshiftSpec& spec, const WordTable& y_words,
               const WordTable& x_words, std::size_t iy, std::size_t ix) const {
    if (masked &&
        !spec.allowed(y_words.words[iy][0], x_words.words[ix][0]))
      return 0.0;
    return values[iy][ix];
  }
};

PairPotential make_pair_potential(const SubshiftSpec& spec, int m, int n,
                                  const std::vector<std::vector<double>>& table,
                                  bool masked);

PairPotential scale(const PairPotential& a, double factor);

struct NormReport {
  double sup_norm = 0.0;
  double lip = 0.0;
  double quotient = 0.0;
};

/// Exact Lipschitz constant of the locally constant extension: the max over
/// allowed word pairs disagreeing first at position j < k of |f-f'|/Lambda^j.
double lip_constant(const SubshiftSpec& spec, const XPotential& f);

/// inf over constants gamma of ||f + gamma||_0, i.e. (max f - min f) / 2.
double quotient_norm(const XPotential& f);

double sup_norm(const XPotential& f);

NormReport norms(const SubshiftSpec& spec, const XPotential& f);

/// Sup norm over effective (mask-applied) entries.
double pair_sup_norm(const SubshiftSpec& spec, const PairPotential& a);

/// Lipschitz constant of A in each variable separately, maximized. Pairs
/// where the mask differs are excluded here: their oscillation is charged to
/// the sup norm in every bound of the form ||A||_0 + Lip(A).
double pair_lip(const SubshiftSpec& spec, const PairPotential& a);

/// Samples a general observable at one canonical point per cylinder pair
/// (the sampler sees the finite words; it is expected to treat them as
/// periodic points) and returns the table plus the guaranteed sup-error
/// bound LipA * Lambda^min(m,n).
using PairSampler = std::function<double(const Word& y, const Word& x)>;

struct TruncationResult {
  PairPotential potential;
  double error_bound = 0.0;
};

TruncationResult truncate_to_range(const SubshiftSpec& spec,
                                   const PairSampler& sampler, int m, int n,
                                   double lip_a, bool masked = true);

}  // namespace effpot
