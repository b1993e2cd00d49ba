#include "effpot/effective.hpp"

#include <algorithm>
#include <cmath>

namespace effpot {

namespace {

// x-side potential psi_w(v) = A(w, v) + phi(v) on depth-d words, for the
// y-word of ordinal iy. `x_prefix` maps depth-d ordinals to depth-n ordinals.
XPotential y_section(const SubshiftSpec& spec, const PairPotential& a,
                     const WordTable& y_words, const WordTable& x_words,
                     const WordTable& deep,
                     const std::vector<std::size_t>& x_prefix,
                     const XPotential& phi_lifted, std::size_t iy) {
  XPotential psi{deep.depth, std::vector<double>(deep.size())};
  for (std::size_t v = 0; v < deep.size(); ++v)
    psi.values[v] = a.value(spec, y_words, x_words, iy, x_prefix[v]) +
                    phi_lifted.values[v];
  return psi;
}

}  // namespace

XPotential apply_G_plus(const SubshiftSpec& spec, const PairPotential& a,
                        const XPotential& phi, double tol,
                        std::size_t max_iter) {
  const int d = std::max(a.x_depth, phi.depth);
  WordTable y_words = enumerate_words(spec, a.y_depth);
  WordTable x_words = enumerate_words(spec, a.x_depth);
  WordTable deep = enumerate_words(spec, d);
  std::vector<std::size_t> x_prefix(deep.size());
  for (std::size_t v = 0; v < deep.size(); ++v)
    x_prefix[v] = deep.prefix_index(v, x_words);
  XPotential phi_lifted = lift_to_depth(spec, phi, d);

  XPotential out{a.y_depth, std::vector<double>(y_words.size())};
  for (std::size_t iy = 0; iy < y_words.size(); ++iy) {
    XPotential psi = y_section(spec, a, y_words, x_words, deep, x_prefix,
                               phi_lifted, iy);
    try {
      out.values[iy] = pressure(spec, psi, tol, max_iter).pressure;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoConvergence)
        throw Error(ErrorKind::NoConvergence,
                    std::string(e.what()) + " (at y-word " +
                        word_to_string(y_words.words[iy]) + ")");
      throw;
    }
  }
  return out;
}

Word default_base_word(const SubshiftSpec& spec, const PairPotential& a) {
  return enumerate_words(spec, a.y_depth).words.front();
}

FixedPointResult solve_fixed_point(const SubshiftSpec& spec,
                                   const PairPotential& a,
                                   const Word& base_word,
                                   const SolveOptions& opts,
                                   const std::optional<XPotential>& phi0) {
  WordTable y_words = enumerate_words(spec, a.y_depth);
  const std::size_t base = y_words.index_of(base_word);

  XPotential phi{a.y_depth, std::vector<double>(y_words.size(), 0.0)};
  if (phi0) {
    if (phi0->depth != a.y_depth)
      throw Error(ErrorKind::DepthMismatch,
                  "starting potential must live on depth-" +
                      std::to_string(a.y_depth) + " y-words");
    phi = *phi0;
    double v0 = phi.values[base];
    for (double& v : phi.values) v -= v0;
  }

  FixedPointResult res;
  res.base_word = base_word;
  double prev_step = -1.0;
  for (std::size_t n = 0; n < opts.max_iter; ++n) {
    XPotential g = apply_G_plus(spec, a, phi, opts.pressure_tol,
                                opts.pressure_max_iter);
    double lambda = g.values[base];
    double residual = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      residual = std::max(residual,
                          std::abs(g.values[i] - phi.values[i] - lambda));

    XPotential next = shift(g, -lambda);
    double step = quotient_norm(subtract(next, phi));
    res.contraction_trace.push_back(step);

    res.phi_plus = phi;
    res.lambda_plus = lambda;
    res.residual = residual;
    res.iterations = n + 1;
    if (residual <= opts.tol) {
      res.converged = true;
      return res;
    }

    if (opts.accel && prev_step > 0.0 && step > 0.0 && step < prev_step) {
      // Aitken-style over-relaxation on the residual sequence.
      double rho = step / prev_step;
      double factor = std::min(1.0 / (1.0 - rho), 10.0);
      for (std::size_t i = 0; i < phi.values.size(); ++i)
        phi.values[i] += factor * (next.values[i] - phi.values[i]);
      double v0 = phi.values[base];
      for (double& v : phi.values) v -= v0;
    } else {
      phi = std::move(next);
    }
    prev_step = step;
  }
  res.converged = false;
  return res;
}

EffectiveFamily effective_family(const SubshiftSpec& spec,
                                 const PairPotential& a,
                                 const FixedPointResult& fp, double tol,
                                 std::size_t max_iter) {
  const int d = std::max(a.x_depth, fp.phi_plus.depth);
  WordTable y_words = enumerate_words(spec, a.y_depth);
  WordTable x_words = enumerate_words(spec, a.x_depth);
  WordTable deep = enumerate_words(spec, d);
  std::vector<std::size_t> x_prefix(deep.size());
  for (std::size_t v = 0; v < deep.size(); ++v)
    x_prefix[v] = deep.prefix_index(v, x_words);
  XPotential phi_lifted = lift_to_depth(spec, fp.phi_plus, d);

  EffectiveFamily fam;
  fam.y_depth = a.y_depth;
  for (std::size_t iy = 0; iy < y_words.size(); ++iy) {
    XPotential psi = y_section(spec, a, y_words, x_words, deep, x_prefix,
                               phi_lifted, iy);
    MarkovMeasure mu = equilibrium(spec, psi, tol, max_iter);
    double value = integrate(spec, mu, psi) + ks_entropy(spec, mu);
    fam.measures.push_back(std::move(mu));
    fam.residuals.push_back(
        std::abs(value - fp.phi_plus.values[iy] - fp.lambda_plus));
  }
  return fam;
}

ContractionProbe contraction_probe(const SubshiftSpec& spec,
                                   const PairPotential& a,
                                   const XPotential& phi,
                                   const XPotential& psi, double tol) {
  const int d = std::max(phi.depth, psi.depth);
  XPotential f = lift_to_depth(spec, phi, d);
  XPotential g = lift_to_depth(spec, psi, d);
  XPotential diff = subtract(f, g);

  XPotential gf = apply_G_plus(spec, a, f, tol);
  XPotential gg = apply_G_plus(spec, a, g, tol);
  XPotential gdiff = subtract(gf, gg);

  ContractionProbe probe;
  probe.c_dist_before = quotient_norm(diff);
  probe.c_dist_after = quotient_norm(gdiff);
  probe.sup_dist_before = sup_norm(diff);
  probe.sup_dist_after = sup_norm(gdiff);
  return probe;
}

}  // namespace effpot
