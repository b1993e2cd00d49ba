#include "effpot/transship.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "effpot/zerotemp.hpp"

namespace effpot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::vector<std::pair<std::size_t, double>>> predecessors(
    const WeightedDigraph& g) {
  std::vector<std::vector<std::pair<std::size_t, double>>> pred(g.node_count);
  for (std::size_t u = 0; u < g.node_count; ++u)
    for (const auto& [v, w] : g.succ[u]) pred[v].emplace_back(u, w);
  return pred;
}

bool all_reachable(const std::vector<std::vector<std::size_t>>& adj,
                   std::size_t n) {
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c == 1; });
}

}  // namespace

WeightedDigraph node_weight_digraph(const BlockGraph& g,
                                    const std::vector<double>& node_weight) {
  WeightedDigraph wg;
  wg.node_count = g.nodes.size();
  wg.succ.resize(wg.node_count);
  for (std::size_t u = 0; u < wg.node_count; ++u)
    for (std::size_t v : g.succ[u]) wg.succ[u].emplace_back(v, node_weight[u]);
  return wg;
}

MaxMeanCycleResult karp_max_mean_cycle(const WeightedDigraph& g) {
  const std::size_t n = g.node_count;
  if (n == 0)
    throw Error(ErrorKind::NotStronglyConnected, "empty graph");
  {
    std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
    std::size_t edges = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (const auto& [v, w] : g.succ[u]) {
        fwd[u].push_back(v);
        bwd[v].push_back(u);
        ++edges;
      }
    if (edges == 0 || !all_reachable(fwd, n) || !all_reachable(bwd, n))
      throw Error(ErrorKind::NotStronglyConnected,
                  "graph is not strongly connected");
  }
  auto pred = predecessors(g);

  // Karp recurrence: D[k][v] = best weight of a k-edge walk 0 -> v.
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNegInf));
  d[0][0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t v = 0; v < n; ++v)
      for (const auto& [u, w] : pred[v])
        if (d[k - 1][u] != kNegInf)
          d[k][v] = std::max(d[k][v], d[k - 1][u] + w);

  double mu = kNegInf;
  for (std::size_t v = 0; v < n; ++v) {
    if (d[n][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      if (d[k][v] != kNegInf)
        worst = std::min(worst,
                         (d[n][v] - d[k][v]) / static_cast<double>(n - k));
    mu = std::max(mu, worst);
  }

  // Longest-path potentials for the shifted weights w - mu. No positive
  // cycles remain, so n relaxation rounds suffice.
  std::vector<double> pot(n, kNegInf);
  pot[0] = 0.0;
  for (std::size_t round = 0; round < n; ++round)
    for (std::size_t u = 0; u < n; ++u) {
      if (pot[u] == kNegInf) continue;
      for (const auto& [v, w] : g.succ[u])
        pot[v] = std::max(pot[v], pot[u] + w - mu);
    }

  double scale = 1.0;
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& [v, w] : g.succ[u]) scale = std::max(scale, std::abs(w));
  const double eps = 1e-9 * scale * static_cast<double>(n);

  // Every optimal cycle lies in the subgraph of tight edges.
  std::vector<std::vector<std::size_t>> tight(n);
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& [v, w] : g.succ[u])
      if (pot[u] + w - mu >= pot[v] - eps) tight[u].push_back(v);

  // Shortest tight cycle through each node; the global minimum is simple.
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::size_t best_len = inf, start = inf;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> dist(n, inf);
    std::deque<std::size_t> q;
    for (std::size_t v : tight[s])
      if (dist[v] == inf && v != s) {
        dist[v] = 1;
        q.push_back(v);
      }
    std::size_t through = inf;
    if (std::find(tight[s].begin(), tight[s].end(), s) != tight[s].end())
      through = 1;
    while (!q.empty() && through == inf) {
      std::size_t u = q.front();
      q.pop_front();
      for (std::size_t v : tight[u]) {
        if (v == s) {
          through = dist[u] + 1;
          break;
        }
        if (dist[v] == inf) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
      }
    }
    if (through < best_len) {
      best_len = through;
      start = s;
    }
  }
  if (best_len == inf)
    throw Error(ErrorKind::AssertionFailure,
                "no tight cycle found; numerical tolerance too strict");

  // Lexicographically smallest walk of exactly best_len tight edges from
  // start back to start. reach[l][v]: v -> start in exactly l tight edges.
  std::vector<std::vector<char>> reach(best_len + 1,
                                       std::vector<char>(n, 0));
  reach[0][start] = 1;
  for (std::size_t l = 1; l <= best_len; ++l)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u : tight[v])
        if (reach[l - 1][u]) {
          reach[l][v] = 1;
          break;
        }
  std::vector<std::size_t> cycle{start};
  std::size_t cur = start;
  for (std::size_t step = 1; step < best_len; ++step) {
    for (std::size_t v : tight[cur])
      if (reach[best_len - step][v]) {
        cycle.push_back(v);
        cur = v;
        break;
      }
  }

  // Report the mean of the extracted cycle, not the Karp estimate: the two
  // agree within rounding and the cycle mean matches a brute-force oracle
  // bit for bit.
  double sum = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    std::size_t u = cycle[i];
    std::size_t v = cycle[(i + 1) % cycle.size()];
    const auto& row = g.succ[u];
    double best = kNegInf;
    for (const auto& [t, w] : row)
      if (t == v) best = std::max(best, w);
    sum += best;
  }
  MaxMeanCycleResult res;
  res.cycle = std::move(cycle);
  res.length = res.cycle.size();
  res.value = sum / static_cast<double>(res.length);
  return res;
}

SubAction calibrated_subaction(const SubshiftSpec& spec, const XPotential& psi,
                               double c, const Word& base_word,
                               double tol, std::size_t max_iter) {
  BlockGraph g = block_graph(spec, psi.depth);
  const std::size_t n = g.nodes.size();
  const std::size_t base = g.nodes.index_of(base_word);

  double mmc = karp_max_mean_cycle(node_weight_digraph(g, psi.values)).value;
  if (std::abs(mmc - c) > 1e-9)
    throw Error(ErrorKind::WrongC,
                "c=" + std::to_string(c) + " but max mean cycle is " +
                    std::to_string(mmc));

  auto apply_T = [&](const std::vector<double>& u) {
    std::vector<double> t(n, kNegInf);
    for (std::size_t z = 0; z < n; ++z)
      for (std::size_t w : g.pred[z])
        t[z] = std::max(t[z], psi.values[w] - c + u[w]);
    return t;
  };
  auto normalize = [&](std::vector<double>& u) {
    double v0 = u[base];
    for (double& x : u) x -= v0;
  };
  auto step_norm = [&](const std::vector<double>& a,
                       const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s = std::max(s, std::abs(a[i] - b[i]));
    return s;
  };

  std::vector<double> u(n, 0.0);
  std::deque<std::vector<double>> history;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
  int averaging_attempts = 0;

  for (std::size_t it = 0; it < max_iter; ++it) {
    std::vector<double> next = apply_T(u);
    normalize(next);
    residual = step_norm(next, u);
    if (residual <= tol) {
      u = std::move(next);
      converged = true;
      break;
    }
    // Relative value iteration can settle into a cycle; the average over
    // one period is then a candidate fixed point.
    std::size_t period = 0;
    for (std::size_t p = 2; p <= history.size(); ++p)
      if (step_norm(next, history[history.size() - p]) <= 1e-12) {
        period = p;
        break;
      }
    if (period > 0 && averaging_attempts < 3) {
      ++averaging_attempts;
      std::vector<double> avg(n, 0.0);
      for (std::size_t p = 0; p < period; ++p) {
        const auto& h = p == 0 ? next : history[history.size() - p];
        for (std::size_t i = 0; i < n; ++i) avg[i] += h[i];
      }
      for (double& x : avg) x /= static_cast<double>(period);
      normalize(avg);
      std::vector<double> t = apply_T(avg);
      normalize(t);
      double r = step_norm(t, avg);
      if (r <= tol) {
        u = std::move(avg);
        residual = r;
        converged = true;
        break;
      }
    }
    history.push_back(next);
    if (history.size() > 64) history.pop_front();
    u = std::move(next);
  }

  SubAction sa;
  sa.u = XPotential{psi.depth, u};
  sa.calibration_residual = residual;
  sa.converged = converged;
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t z : g.succ[w])
      if (psi.values[w] + u[w] - u[z] >= c - 1e-9)
        sa.equality_set.emplace_back(w, z);
  return sa;
}

namespace {

Word extend_to_depth(const SubshiftSpec& spec, Word w, int d) {
  while (static_cast<int>(w.size()) < d)
    for (int a = 1; a <= spec.r; ++a)
      if (spec.allowed(w.back(), a)) {
        w.push_back(a);
        break;
      }
  return w;
}

}  // namespace

std::vector<SubAction> subactions_for(const SubshiftSpec& spec,
                                      const PairPotential& a,
                                      const XPotential& v, double c,
                                      const Word& base_word, double tol,
                                      std::size_t max_iter) {
  const int d = std::max(a.x_depth, v.depth);
  WordTable y_words = enumerate_words(spec, a.y_depth);
  WordTable x_words = enumerate_words(spec, a.x_depth);
  WordTable deep = enumerate_words(spec, d);
  XPotential v_lifted = lift_to_depth(spec, v, d);
  Word deep_base = extend_to_depth(spec, base_word, d);

  std::vector<SubAction> subs;
  subs.reserve(y_words.size());
  for (std::size_t iy = 0; iy < y_words.size(); ++iy) {
    XPotential psi{d, std::vector<double>(deep.size())};
    for (std::size_t jv = 0; jv < deep.size(); ++jv)
      psi.values[jv] =
          a.value(spec, y_words, x_words, iy, deep.prefix_index(jv, x_words)) +
          v_lifted.values[jv] - v.values[iy];
    subs.push_back(
        calibrated_subaction(spec, psi, c, deep_base, tol, max_iter));
  }
  return subs;
}

CostTable build_cost_table(const SubshiftSpec& spec, const PairPotential& a,
                           const XPotential& v, double c,
                           const std::vector<SubAction>& subactions) {
  (void)v;
  (void)c;
  const int d = subactions.empty() ? a.x_depth : subactions.front().u.depth;
  WordTable y_words = enumerate_words(spec, a.y_depth);
  WordTable x_words = enumerate_words(spec, a.x_depth);
  WordTable mid = enumerate_words(spec, d);
  WordTable ext = enumerate_words(spec, d + 1);

  CostTable table;
  table.y_depth = a.y_depth;
  table.x_depth = d + 1;
  table.values.assign(y_words.size(),
                      std::vector<double>(ext.size(), 0.0));
  table.compatible.assign(y_words.size(),
                          std::vector<char>(ext.size(), 0));
  for (std::size_t iy = 0; iy < y_words.size(); ++iy) {
    const XPotential& u = subactions[iy].u;
    for (std::size_t jx = 0; jx < ext.size(); ++jx) {
      const Word& x = ext.words[jx];
      if (!spec.allowed(y_words.words[iy][0], x[0])) continue;
      table.compatible[iy][jx] = 1;
      std::size_t head = ext.prefix_index(jx, mid);
      std::size_t tail = mid.index_of(Word(x.begin() + 1, x.end()));
      std::size_t xa = ext.prefix_index(jx, x_words);
      table.values[iy][jx] = a.value(spec, y_words, x_words, iy, xa) +
                             u.values[head] - u.values[tail];
    }
  }
  return table;
}

SimplexResult solve_lp_max(std::vector<std::vector<double>> a,
                           std::vector<double> b, std::vector<double> c,
                           double tol) {
  std::size_t m = a.size();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0.0) {
      for (double& x : a[i]) x = -x;
      b[i] = -b[i];
    }

  // Tableau over structural columns 0..n-1 and artificials n..n+m-1.
  const std::size_t total = n + m;
  std::vector<std::vector<double>> t(m, std::vector<double>(total + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][total] = b[i];
    basis[i] = n + i;
  }
  std::vector<char> row_live(m, 1);
  std::size_t iterations = 0;

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    double pv = t[pr][pc];
    for (double& x : t[pr]) x /= pv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pr || !row_live[i]) continue;
      double f = t[i][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
    ++iterations;
  };

  // Bland's rule throughout: smallest improving column enters, smallest
  // basis index leaves on ratio ties.
  auto optimize = [&](const std::vector<double>& cost, bool allow_artificial) {
    for (;;) {
      std::vector<double> y(m, 0.0);
      std::size_t enter = total;
      for (std::size_t j = 0; j < total; ++j) {
        if (!allow_artificial && j >= n) break;
        bool is_basic = false;
        for (std::size_t i = 0; i < m; ++i)
          if (row_live[i] && basis[i] == j) is_basic = true;
        if (is_basic) continue;
        double red = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (row_live[i]) red -= cost[basis[i]] * t[i][j];
        if (red > tol) {
          enter = j;
          break;
        }
      }
      if (enter == total) return;
      std::size_t leave = m;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!row_live[i] || t[i][enter] <= tol) continue;
        double ratio = t[i][total] / t[i][enter];
        if (leave == m || ratio < best_ratio - tol ||
            (std::abs(ratio - best_ratio) <= tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m)
        throw Error(ErrorKind::Unbounded, "LP is unbounded");
      pivot(leave, enter);
      if (iterations > 200000)
        throw Error(ErrorKind::NoConvergence, "simplex iteration cap reached");
    }
  };

  std::vector<double> phase1(total, 0.0);
  for (std::size_t j = n; j < total; ++j) phase1[j] = -1.0;
  optimize(phase1, true);
  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (row_live[i] && basis[i] >= n) infeas += t[i][total];
  if (infeas > 1e-9)
    throw Error(ErrorKind::Infeasible, "no feasible point");
  // Pivot zero-level artificials out; fully zero rows are redundant.
  for (std::size_t i = 0; i < m; ++i) {
    if (!row_live[i] || basis[i] < n) continue;
    std::size_t col = total;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t[i][j]) > 1e-9) {
        col = j;
        break;
      }
    if (col == total)
      row_live[i] = 0;
    else
      pivot(i, col);
  }

  std::vector<double> phase2(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  optimize(phase2, false);

  SimplexResult res;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (row_live[i] && basis[i] < n) res.x[basis[i]] = t[i][total];
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  res.iterations = iterations;
  return res;
}

TransshipmentResult transshipment_lp(const SubshiftSpec& spec,
                                     const CostTable& costs, double tol) {
  WordTable y_words = enumerate_words(spec, costs.y_depth);
  WordTable x_words = enumerate_words(spec, costs.x_depth);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t iy = 0; iy < y_words.size(); ++iy)
    for (std::size_t jx = 0; jx < x_words.size(); ++jx)
      if (costs.compatible[iy][jx]) pairs.emplace_back(iy, jx);
  if (pairs.empty())
    throw Error(ErrorKind::Infeasible, "no compatible word pair");

  std::vector<std::size_t> x_prefix(x_words.size());
  for (std::size_t jx = 0; jx < x_words.size(); ++jx)
    x_prefix[jx] = x_words.prefix_index(jx, y_words);

  const std::size_t nv = pairs.size();
  const std::size_t nm = y_words.size();
  std::vector<std::vector<double>> a(nm + 1, std::vector<double>(nv, 0.0));
  std::vector<double> b(nm + 1, 0.0);
  std::vector<double> obj(nv, 0.0);
  for (std::size_t k = 0; k < nv; ++k) {
    auto [iy, jx] = pairs[k];
    a[iy][k] += 1.0;              // y marginal
    a[x_prefix[jx]][k] -= 1.0;    // x marginal, projected to depth m
    a[nm][k] = 1.0;               // normalization
    obj[k] = costs.values[iy][jx];
  }
  b[nm] = 1.0;

  SimplexResult lp = solve_lp_max(a, b, obj, tol);

  TransshipmentResult res;
  res.kappa = lp.objective;
  res.lp_iterations = lp.iterations;
  std::vector<double> row(nm, 0.0), col(nm, 0.0);
  for (std::size_t k = 0; k < nv; ++k) {
    if (lp.x[k] <= 1e-12) continue;
    auto [iy, jx] = pairs[k];
    res.eta.emplace_back(iy, jx, lp.x[k]);
    row[iy] += lp.x[k];
    col[x_prefix[jx]] += lp.x[k];
  }
  for (std::size_t u = 0; u < nm; ++u)
    res.marginal_gap += std::abs(row[u] - col[u]);
  return res;
}

MaxMeanCycleResult cost_cycle_value(const SubshiftSpec& spec,
                                    const CostTable& costs) {
  WordTable y_words = enumerate_words(spec, costs.y_depth);
  WordTable x_words = enumerate_words(spec, costs.x_depth);
  WeightedDigraph g;
  g.node_count = x_words.size();
  g.succ.resize(g.node_count);
  for (std::size_t z = 0; z < x_words.size(); ++z) {
    std::size_t iy = x_words.prefix_index(z, y_words);
    for (std::size_t z2 = 0; z2 < x_words.size(); ++z2)
      if (costs.compatible[iy][z2])
        g.succ[z].emplace_back(z2, costs.values[iy][z2]);
  }
  return karp_max_mean_cycle(g);
}

TripleReport verify_triple_equality(const SubshiftSpec& spec,
                                    const PairPotential& a,
                                    const ZeroTempResult& zt,
                                    const Word& base_word, double pair_tol,
                                    double extrapolation_tol) {
  TripleReport report;
  report.c_maxplus = zt.c_maxplus;
  report.c_extrapolated = zt.c_extrapolated;
  report.has_extrapolated = zt.has_extrapolated;
  report.v_converged = zt.converged;
  report.verdict = zt.converged ? "full" : "c-only";

  bool pair_checked = false;
  if (zt.converged) {
    std::vector<SubAction> subs =
        subactions_for(spec, a, zt.v, zt.c_maxplus, base_word);
    CostTable costs =
        build_cost_table(spec, a, zt.v, zt.c_maxplus, subs);
    report.transshipment = transshipment_lp(spec, costs);
    report.kappa = report.transshipment.kappa;
    report.cost_cycle = cost_cycle_value(spec, costs).value;
    pair_checked = true;
  } else {
    report.kappa = std::numeric_limits<double>::quiet_NaN();
    report.cost_cycle = std::numeric_limits<double>::quiet_NaN();
  }

  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::AssertionFailure,
                what + " (c_maxplus=" + std::to_string(report.c_maxplus) +
                    ", kappa=" + std::to_string(report.kappa) +
                    ", cost_cycle=" + std::to_string(report.cost_cycle) +
                    ", c_extrapolated=" +
                    std::to_string(report.c_extrapolated) + ")");
  };
  if (pair_checked && std::abs(report.kappa - report.cost_cycle) > pair_tol)
    fail("transshipment value disagrees with the cost cycle value");
  if (report.has_extrapolated) {
    if (std::abs(report.c_maxplus - report.c_extrapolated) >
        extrapolation_tol)
      fail("additive eigenvalue disagrees with the sweep extrapolation");
    if (pair_checked &&
        std::abs(report.kappa - report.c_extrapolated) > extrapolation_tol)
      fail("transshipment value disagrees with the sweep extrapolation");
  }
  report.ok = true;
  return report;
}

}  // namespace effpot
