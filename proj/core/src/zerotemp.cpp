#include "effpot/zerotemp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace effpot {

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int e = 0; e <= 12; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

std::vector<SweepRow> beta_sweep(const SubshiftSpec& spec,
                                 const PairPotential& a,
                                 const std::vector<double>& grid,
                                 const Word& base_word,
                                 const SolveOptions& opts) {
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw Error(ErrorKind::ValidationError,
                  "beta grid must be strictly increasing");
  if (!grid.empty() && grid.front() <= 0.0)
    throw Error(ErrorKind::ValidationError, "beta values must be positive");

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double beta : grid) {
    FixedPointResult fp =
        solve_fixed_point(spec, scale(a, beta), base_word, opts);
    SweepRow row;
    row.beta = beta;
    row.lambda_over_beta = fp.lambda_plus / beta;
    row.phi_over_beta = scale(fp.phi_plus, 1.0 / beta);
    row.lip_phi_over_beta = lip_constant(spec, row.phi_over_beta);
    row.iterations = fp.iterations;
    row.converged = fp.converged;
    rows.push_back(std::move(row));
  }
  return rows;
}

double extrapolate_c(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> usable;
  for (const SweepRow& r : rows)
    if (r.converged) usable.push_back(&r);
  if (usable.size() < 3)
    throw Error(ErrorKind::InsufficientRows,
                "need at least 3 converged sweep rows, have " +
                    std::to_string(usable.size()));
  double beta_max = usable.back()->beta;
  std::vector<const SweepRow*> fit;
  for (const SweepRow* r : usable)
    if (r->beta >= beta_max / 10.0) fit.push_back(r);
  if (fit.size() < 3)
    fit.assign(usable.end() - 3, usable.end());

  // Least squares for lambda/beta = c + b / beta.
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const SweepRow* r : fit) {
    double x = 1.0 / r->beta;
    double y = r->lambda_over_beta;
    s1 += 1.0;
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  double det = s1 * sxx - sx * sx;
  return (sy * sxx - sx * sxy) / det;
}

XPotential maxplus_G(const SubshiftSpec& spec, const PairPotential& a,
                     const XPotential& phi) {
  const int d = std::max(a.x_depth, phi.depth);
  WordTable y_words = enumerate_words(spec, a.y_depth);
  WordTable x_words = enumerate_words(spec, a.x_depth);
  BlockGraph g = block_graph(spec, d);
  XPotential phi_lifted = lift_to_depth(spec, phi, d);
  std::vector<std::size_t> x_prefix(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    x_prefix[v] = g.nodes.prefix_index(v, x_words);

  XPotential out{a.y_depth, std::vector<double>(y_words.size())};
  std::vector<double> weights(g.nodes.size());
  for (std::size_t iy = 0; iy < y_words.size(); ++iy) {
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
      weights[v] = a.value(spec, y_words, x_words, iy, x_prefix[v]) +
                   phi_lifted.values[v];
    out.values[iy] =
        karp_max_mean_cycle(node_weight_digraph(g, weights)).value;
  }
  return out;
}

ZeroTempResult additive_eigen(const SubshiftSpec& spec,
                              const PairPotential& a, const Word& base_word,
                              double tol, std::size_t max_iter,
                              const std::optional<XPotential>& v0) {
  WordTable y_words = enumerate_words(spec, a.y_depth);
  const std::size_t n = y_words.size();
  const std::size_t base = y_words.index_of(base_word);

  ZeroTempResult res;
  res.base_word = base_word;

  XPotential v{a.y_depth, std::vector<double>(n, 0.0)};
  if (v0) {
    if (v0->depth != a.y_depth)
      throw Error(ErrorKind::DepthMismatch,
                  "starting iterate must live on depth-" +
                      std::to_string(a.y_depth) + " y-words");
    v = *v0;
    double b0 = v.values[base];
    for (double& x : v.values) x -= b0;
  }

  auto step_norm = [](const XPotential& f, const XPotential& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      s = std::max(s, std::abs(f.values[i] - g.values[i]));
    return s;
  };

  std::deque<XPotential> history;
  int averaging_attempts = 0;
  double increment = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iter; ++it) {
    XPotential qv = maxplus_G(spec, a, v);
    double c = qv.values[base];
    XPotential next = shift(qv, -c);
    increment = step_norm(next, v);
    res.iterations = it + 1;
    if (increment <= tol) {
      res.v = next;
      res.c_maxplus = c;
      res.eigen_residual = increment;
      res.converged = true;
      return res;
    }
    std::size_t period = 0;
    for (std::size_t p = 2; p <= history.size(); ++p)
      if (step_norm(next, history[history.size() - p]) <= 1e-12) {
        period = p;
        break;
      }
    if (period > 0 && averaging_attempts < 3) {
      ++averaging_attempts;
      XPotential avg{a.y_depth, std::vector<double>(n, 0.0)};
      for (std::size_t p = 0; p < period; ++p) {
        const XPotential& h = p == 0 ? next : history[history.size() - p];
        for (std::size_t i = 0; i < n; ++i) avg.values[i] += h.values[i];
      }
      for (double& x : avg.values) x /= static_cast<double>(period);
      double b0 = avg.values[base];
      for (double& x : avg.values) x -= b0;
      XPotential q2 = maxplus_G(spec, a, avg);
      double c2 = q2.values[base];
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        r = std::max(r, std::abs(q2.values[i] - avg.values[i] - c2));
      if (r <= tol) {
        res.v = avg;
        res.c_maxplus = c2;
        res.eigen_residual = r;
        res.converged = true;
        res.iterations = it + 2;
        return res;
      }
    }
    history.push_back(next);
    if (history.size() > 64) history.pop_front();
    v = std::move(next);
  }

  // Growth-rate fallback: c = lim Q^n(0)(w0)/n via a Cesaro average of the
  // unnormalized increments. V from the last iterate is reported but
  // flagged as non-converged.
  XPotential w{a.y_depth, std::vector<double>(n, 0.0)};
  const std::size_t steps = 512;
  std::vector<double> increments;
  increments.reserve(steps);
  for (std::size_t itn = 0; itn < steps; ++itn) {
    XPotential qw = maxplus_G(spec, a, w);
    increments.push_back(qw.values[base] - w.values[base]);
    w = std::move(qw);
  }
  double c = 0.0;
  for (std::size_t i = steps / 2; i < steps; ++i) c += increments[i];
  c /= static_cast<double>(steps - steps / 2);

  res.v = v;
  res.c_maxplus = c;
  res.eigen_residual = increment;
  res.converged = false;
  return res;
}

ZeroTempBundle run_zero_temperature(const SubshiftSpec& spec,
                                    const PairPotential& a,
                                    const std::vector<double>& grid,
                                    const Word& base_word,
                                    const SolveOptions& opts,
                                    double eigen_tol,
                                    std::size_t eigen_max_iter) {
  ZeroTempBundle bundle;
  bundle.rows = beta_sweep(spec, a, grid, base_word, opts);
  bundle.result = additive_eigen(spec, a, base_word, eigen_tol,
                                 eigen_max_iter);
  try {
    bundle.result.c_extrapolated = extrapolate_c(bundle.rows);
    bundle.result.has_extrapolated = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientRows) throw;
    bundle.result.has_extrapolated = false;
  }
  return bundle;
}

}  // namespace effpot
