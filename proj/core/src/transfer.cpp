#include "effpot/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace effpot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// One application of the weighted block matrix in log domain.
// forward: t(w) = psi(w) + LSE_{w' in succ(w)} u(w')
// adjoint: t(w') = LSE_{w in pred(w')} (psi(w) + u(w))
std::vector<double> apply_log(const TransferMatrix& lm,
                              const std::vector<double>& u, bool adjoint) {
  const std::size_t n = u.size();
  std::vector<double> t(n, kNegInf);
  std::vector<double> terms;
  for (std::size_t w = 0; w < n; ++w) {
    terms.clear();
    if (!adjoint) {
      for (std::size_t s : lm.graph.succ[w]) terms.push_back(u[s]);
      t[w] = lm.log_weight[w] + log_sum_exp(terms);
    } else {
      for (std::size_t s : lm.graph.pred[w])
        terms.push_back(lm.log_weight[s] + u[s]);
      t[w] = log_sum_exp(terms);
    }
  }
  return t;
}

void max_normalize(std::vector<double>& u) {
  double m = *std::max_element(u.begin(), u.end());
  for (double& x : u) x -= m;
}

// Damped log-domain power iteration. The averaging step keeps the scheme
// convergent on period-2 block graphs (a symmetric transition matrix can be
// bipartite). Convergence is certified in log units: at an exact eigenpair
// t - u is constant (= p), so max_i |t_i - u_i - p| bounds the relative
// componentwise error of L h / (e^p h). A linear-domain vector residual
// would be blind to small components of h (their error hides below tol
// while still shifting the eigenvalue at first order), which matters at
// large potentials where h spans hundreds of orders of magnitude.
std::vector<double> power_iterate(const TransferMatrix& lm, bool adjoint,
                                  double tol, std::size_t max_iter,
                                  std::size_t& iterations, double& residual) {
  const std::size_t n = lm.log_weight.size();
  // Log-unit residuals cannot beat rounding of t = psi + LSE(...) at the
  // potential's own scale, so the threshold is scale-relative.
  double scale = 1.0;
  for (double w : lm.log_weight) scale = std::max(scale, std::abs(w));
  const double stop = tol * scale;
  std::vector<double> u(n, 0.0);
  residual = std::numeric_limits<double>::infinity();
  for (iterations = 0; iterations < max_iter; ++iterations) {
    std::vector<double> t = apply_log(lm, u, adjoint);
    // Rayleigh-type eigenvalue estimate: <exp u, L exp u> / <exp u, exp u>.
    double num = kNegInf, den = kNegInf;
    {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = t[i] + u[i];
        b[i] = 2.0 * u[i];
      }
      num = log_sum_exp(a);
      den = log_sum_exp(b);
    }
    double p = num - den;
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(t[i] - u[i] - p));
    if (residual <= stop) {
      ++iterations;
      return u;
    }
    double mt = *std::max_element(t.begin(), t.end());
    for (std::size_t i = 0; i < n; ++i) {
      double a = t[i] - mt;
      double m = std::max(a, u[i]);
      u[i] = m + std::log(std::exp(a - m) + std::exp(u[i] - m));
    }
    max_normalize(u);
  }
  throw Error(ErrorKind::NoConvergence,
              "power iteration residual " + std::to_string(residual) +
                  " after " + std::to_string(max_iter) + " iterations");
}

}  // namespace

TransferMatrix transfer_matrix(const SubshiftSpec& spec,
                               const XPotential& psi) {
  TransferMatrix lm;
  lm.depth = psi.depth;
  lm.graph = block_graph(spec, psi.depth);
  lm.log_weight = psi.values;
  return lm;
}

PressureResult pressure(const SubshiftSpec& spec, const XPotential& psi,
                        double tol, std::size_t max_iter) {
  TransferMatrix lm = transfer_matrix(spec, psi);
  const std::size_t n = lm.log_weight.size();

  PressureResult out;
  std::size_t it_r = 0, it_l = 0;
  double res_r = 0.0, res_l = 0.0;
  out.right_log = power_iterate(lm, false, tol, max_iter, it_r, res_r);
  out.left_log = power_iterate(lm, true, tol, max_iter, it_l, res_l);
  out.iterations = it_r + it_l;
  out.residual = std::max(res_r, res_l);

  // Two-sided Rayleigh quotient log(l' L h / l' h): eigenvalue error is
  // second order in the eigenvector residuals.
  std::vector<double> lh = apply_log(lm, out.right_log, false);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = out.left_log[i] + lh[i];
    b[i] = out.left_log[i] + out.right_log[i];
  }
  out.pressure = log_sum_exp(a) - log_sum_exp(b);

  out.right_vec.resize(n);
  out.left_vec.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.right_vec[i] = std::exp(out.right_log[i]);
    out.left_vec[i] = std::exp(out.left_log[i]);
  }
  return out;
}

MarkovMeasure equilibrium(const SubshiftSpec& spec, const XPotential& psi,
                          double tol, std::size_t max_iter) {
  PressureResult pr = pressure(spec, psi, tol, max_iter);
  TransferMatrix lm = transfer_matrix(spec, psi);
  const std::size_t n = lm.log_weight.size();

  MarkovMeasure mu;
  mu.depth = psi.depth;
  mu.p.assign(n, {});
  for (std::size_t w = 0; w < n; ++w) {
    const auto& succ = lm.graph.succ[w];
    std::vector<double> row(succ.size());
    for (std::size_t j = 0; j < succ.size(); ++j)
      row[j] = std::exp(lm.log_weight[w] + pr.right_log[succ[j]] -
                        pr.pressure - pr.right_log[w]);
    double s = 0.0;
    for (double q : row) s += q;
    for (double& q : row) q /= s;  // rows exactly stochastic
    mu.p[w] = std::move(row);
  }

  std::vector<double> pi_log(n);
  for (std::size_t i = 0; i < n; ++i)
    pi_log[i] = pr.left_log[i] + pr.right_log[i];
  double z = log_sum_exp(pi_log);
  mu.pi.resize(n);
  for (std::size_t i = 0; i < n; ++i) mu.pi[i] = std::exp(pi_log[i] - z);

  // Polish stationarity below the eigen residual.
  for (int sweep = 0; sweep < 256; ++sweep) {
    std::vector<double> next(n, 0.0);
    for (std::size_t w = 0; w < n; ++w) {
      const auto& succ = lm.graph.succ[w];
      for (std::size_t j = 0; j < succ.size(); ++j)
        next[succ[j]] += mu.pi[w] * mu.p[w][j];
    }
    double s = 0.0;
    for (double q : next) s += q;
    for (double& q : next) q /= s;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diff = std::max(diff, std::abs(next[i] - mu.pi[i]));
    mu.pi = std::move(next);
    if (diff <= 1e-15) break;
  }
  return mu;
}

double ks_entropy(const SubshiftSpec& spec, const MarkovMeasure& mu) {
  (void)spec;
  double h = 0.0;
  for (std::size_t w = 0; w < mu.pi.size(); ++w)
    for (double q : mu.p[w])
      if (q > 0.0) h -= mu.pi[w] * q * std::log(q);
  return h;
}

double integrate(const SubshiftSpec& spec, const MarkovMeasure& mu,
                 const XPotential& f) {
  const int k = mu.depth;
  if (f.depth <= k) {
    WordTable deep = enumerate_words(spec, k);
    WordTable shallow = enumerate_words(spec, f.depth);
    double s = 0.0;
    for (std::size_t i = 0; i < deep.size(); ++i)
      s += mu.pi[i] * f.values[deep.prefix_index(i, shallow)];
    return s;
  }
  if (f.depth == k + 1) {
    BlockGraph g = block_graph(spec, k);
    WordTable deep = enumerate_words(spec, k + 1);
    double s = 0.0;
    for (std::size_t w = 0; w < g.nodes.size(); ++w) {
      const auto& succ = g.succ[w];
      for (std::size_t j = 0; j < succ.size(); ++j) {
        Word ext = g.nodes.words[w];
        ext.push_back(g.nodes.words[succ[j]].back());
        s += mu.pi[w] * mu.p[w][j] * f.values[deep.index_of(ext)];
      }
    }
    return s;
  }
  throw Error(ErrorKind::DepthMismatch,
              "observable depth " + std::to_string(f.depth) +
                  " exceeds measure depth " + std::to_string(k) + " + 1");
}

std::vector<GibbsProfileRow> gibbs_quotient_profile(
    const SubshiftSpec& spec, const XPotential& psi, const MarkovMeasure& mu,
    int n_max, std::size_t word_cap) {
  const int k = psi.depth;
  if (mu.depth != k)
    throw Error(ErrorKind::DepthMismatch, "measure depth must match psi depth");
  if (n_max < k + 1)
    throw Error(ErrorKind::ValidationError, "n_max must be at least depth+1");

  PressureResult pr = pressure(spec, psi);
  BlockGraph g = block_graph(spec, k, word_cap);
  WordTable blocks = g.nodes;

  // log P lookup per edge
  auto log_p = [&](std::size_t w, std::size_t w2) {
    const auto& succ = g.succ[w];
    auto it = std::lower_bound(succ.begin(), succ.end(), w2);
    return std::log(mu.p[w][static_cast<std::size_t>(it - succ.begin())]);
  };

  std::vector<GibbsProfileRow> rows;
  for (int n = k + 1; n <= n_max; ++n) {
    WordTable deep = enumerate_words(spec, n, word_cap);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Word& u : deep.words) {
      // depth-k blocks of u
      std::vector<std::size_t> blk;
      for (int j = 0; j + k <= n; ++j)
        blk.push_back(blocks.index_of(Word(u.begin() + j, u.begin() + j + k)));
      double log_mass = std::log(mu.pi[blk.front()]);
      for (std::size_t j = 0; j + 1 < blk.size(); ++j)
        log_mass += log_p(blk[j], blk[j + 1]);
      double s = 0.0;
      for (std::size_t b : blk) s += psi.values[b];
      double q = std::exp(log_mass - (s - n * pr.pressure));
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    rows.push_back(GibbsProfileRow{n, lo, hi});
  }
  return rows;
}

}  // namespace effpot
