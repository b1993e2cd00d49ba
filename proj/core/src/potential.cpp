#include "effpot/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace effpot {

XPotential lift_to_depth(const SubshiftSpec& spec, const XPotential& f,
                         int d) {
  if (d < f.depth)
    throw Error(ErrorKind::DepthMismatch,
                "cannot evaluate a depth-" + std::to_string(f.depth) +
                    " potential on shorter words");
  if (d == f.depth) return f;
  WordTable deep = enumerate_words(spec, d);
  WordTable shallow = enumerate_words(spec, f.depth);
  XPotential out{d, std::vector<double>(deep.size())};
  for (std::size_t i = 0; i < deep.size(); ++i)
    out.values[i] = f.values[deep.prefix_index(i, shallow)];
  return out;
}

XPotential add(const XPotential& f, const XPotential& g) {
  if (f.depth != g.depth || f.size() != g.size())
    throw Error(ErrorKind::DepthMismatch, "potential depths differ");
  XPotential out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += g.values[i];
  return out;
}

XPotential subtract(const XPotential& f, const XPotential& g) {
  if (f.depth != g.depth || f.size() != g.size())
    throw Error(ErrorKind::DepthMismatch, "potential depths differ");
  XPotential out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= g.values[i];
  return out;
}

XPotential shift(const XPotential& f, double gamma) {
  XPotential out = f;
  for (double& v : out.values) v += gamma;
  return out;
}

XPotential scale(const XPotential& f, double factor) {
  XPotential out = f;
  for (double& v : out.values) v *= factor;
  return out;
}

PairPotential make_pair_potential(const SubshiftSpec& spec, int m, int n,
                                  const std::vector<std::vector<double>>& table,
                                  bool masked) {
  WordTable yw = enumerate_words(spec, m);
  WordTable xw = enumerate_words(spec, n);
  if (table.size() != yw.size())
    throw Error(ErrorKind::MissingEntry,
                "expected " + std::to_string(yw.size()) + " y-rows, got " +
                    std::to_string(table.size()));
  for (const auto& row : table) {
    if (row.size() != xw.size())
      throw Error(ErrorKind::MissingEntry,
                  "expected " + std::to_string(xw.size()) + " x-entries per row");
    for (double v : row)
      if (!std::isfinite(v))
        throw Error(ErrorKind::NonFinite, "pair potential entry is not finite");
  }
  return PairPotential{m, n, table, masked};
}

PairPotential scale(const PairPotential& a, double factor) {
  PairPotential out = a;
  for (auto& row : out.values)
    for (double& v : row) v *= factor;
  return out;
}

double lip_constant(const SubshiftSpec& spec, const XPotential& f) {
  WordTable t = enumerate_words(spec, f.depth);
  double lip = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      const Word& w = t.words[i];
      const Word& v = t.words[j];
      std::size_t pos = 0;
      while (pos < w.size() && w[pos] == v[pos]) ++pos;
      if (pos >= w.size()) continue;  // identical prefixes of full depth
      double d = std::pow(spec.lambda, static_cast<double>(pos));
      lip = std::max(lip, std::abs(f.values[i] - f.values[j]) / d);
    }
  return lip;
}

double quotient_norm(const XPotential& f) {
  if (f.values.empty()) return 0.0;
  auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
  return (*mx - *mn) / 2.0;
}

double sup_norm(const XPotential& f) {
  double s = 0.0;
  for (double v : f.values) s = std::max(s, std::abs(v));
  return s;
}

NormReport norms(const SubshiftSpec& spec, const XPotential& f) {
  return NormReport{sup_norm(f), lip_constant(spec, f), quotient_norm(f)};
}

double pair_sup_norm(const SubshiftSpec& spec, const PairPotential& a) {
  WordTable yw = enumerate_words(spec, a.y_depth);
  WordTable xw = enumerate_words(spec, a.x_depth);
  double s = 0.0;
  for (std::size_t iy = 0; iy < yw.size(); ++iy)
    for (std::size_t ix = 0; ix < xw.size(); ++ix)
      s = std::max(s, std::abs(a.value(spec, yw, xw, iy, ix)));
  return s;
}

double pair_lip(const SubshiftSpec& spec, const PairPotential& a) {
  WordTable yw = enumerate_words(spec, a.y_depth);
  WordTable xw = enumerate_words(spec, a.x_depth);
  auto live = [&](std::size_t iy, std::size_t ix) {
    return !a.masked ||
           spec.allowed(yw.words[iy][0], xw.words[ix][0]);
  };
  double lip = 0.0;
  // Oscillation in y at fixed x.
  for (std::size_t ix = 0; ix < xw.size(); ++ix)
    for (std::size_t i = 0; i < yw.size(); ++i)
      for (std::size_t j = i + 1; j < yw.size(); ++j) {
        if (!live(i, ix) || !live(j, ix)) continue;
        const Word& w = yw.words[i];
        const Word& v = yw.words[j];
        std::size_t pos = 0;
        while (pos < w.size() && w[pos] == v[pos]) ++pos;
        if (pos >= w.size()) continue;
        double d = std::pow(spec.lambda, static_cast<double>(pos));
        lip = std::max(lip, std::abs(a.values[i][ix] - a.values[j][ix]) / d);
      }
  // Oscillation in x at fixed y.
  for (std::size_t iy = 0; iy < yw.size(); ++iy)
    for (std::size_t i = 0; i < xw.size(); ++i)
      for (std::size_t j = i + 1; j < xw.size(); ++j) {
        if (!live(iy, i) || !live(iy, j)) continue;
        const Word& w = xw.words[i];
        const Word& v = xw.words[j];
        std::size_t pos = 0;
        while (pos < w.size() && w[pos] == v[pos]) ++pos;
        if (pos >= w.size()) continue;
        double d = std::pow(spec.lambda, static_cast<double>(pos));
        lip = std::max(lip, std::abs(a.values[iy][i] - a.values[iy][j]) / d);
      }
  return lip;
}

TruncationResult truncate_to_range(const SubshiftSpec& spec,
                                   const PairSampler& sampler, int m, int n,
                                   double lip_a, bool masked) {
  WordTable yw = enumerate_words(spec, m);
  WordTable xw = enumerate_words(spec, n);
  std::vector<std::vector<double>> table(yw.size(),
                                         std::vector<double>(xw.size(), 0.0));
  for (std::size_t iy = 0; iy < yw.size(); ++iy)
    for (std::size_t ix = 0; ix < xw.size(); ++ix) {
      double v = sampler(yw.words[iy], xw.words[ix]);
      if (!std::isfinite(v))
        throw Error(ErrorKind::NonFinite, "sampler returned a non-finite value");
      table[iy][ix] = v;
    }
  double bound = lip_a * std::pow(spec.lambda, std::min(m, n));
  return TruncationResult{make_pair_potential(spec, m, n, table, masked),
                          bound};
}

}  // namespace effpot
