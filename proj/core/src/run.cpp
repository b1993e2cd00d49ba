#include "effpot/run.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "effpot/transfer.hpp"
#include "effpot/transship.hpp"
#include "effpot/zerotemp.hpp"

namespace effpot {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json word_map(const WordTable& words, const std::vector<double>& values) {
  json j = json::object();
  for (std::size_t i = 0; i < words.size(); ++i)
    j[word_to_string(words.words[i])] = values[i];
  return j;
}

json potential_json(const SubshiftSpec& spec, const XPotential& f) {
  WordTable words = enumerate_words(spec, f.depth);
  json j;
  j["depth"] = f.depth;
  j["values"] = word_map(words, f.values);
  return j;
}

json measure_json(const SubshiftSpec& spec, const MarkovMeasure& mu) {
  BlockGraph g = block_graph(spec, mu.depth);
  json j;
  j["depth"] = mu.depth;
  j["pi"] = word_map(g.nodes, mu.pi);
  json edges = json::array();
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    for (std::size_t e = 0; e < g.succ[v].size(); ++e)
      edges.push_back({{"from", word_to_string(g.nodes.words[v])},
                       {"to", word_to_string(g.nodes.words[g.succ[v][e]])},
                       {"p", mu.p[v][e]}});
  j["kernel"] = std::move(edges);
  return j;
}

/// The x-section psi_w(x) = A(w, prefix) + phi(x) on the depth-d table.
XPotential y_section(const SubshiftSpec& spec, const PairPotential& a,
                     const WordTable& y_words, const WordTable& x_words,
                     std::size_t iy, const XPotential& phi, int d) {
  WordTable d_words = enumerate_words(spec, d);
  XPotential phi_lifted = lift_to_depth(spec, phi, d);
  XPotential out{d, std::vector<double>(d_words.size())};
  for (std::size_t v = 0; v < d_words.size(); ++v) {
    std::size_t ix = d_words.prefix_index(v, x_words);
    out.values[v] = a.value(spec, y_words, x_words, iy, ix) +
                    phi_lifted.values[v];
  }
  return out;
}

json sweep_rows_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const SweepRow& r : rows)
    arr.push_back({{"beta", r.beta},
                   {"lambda_over_beta", r.lambda_over_beta},
                   {"lip_phi_over_beta", r.lip_phi_over_beta},
                   {"iterations", r.iterations},
                   {"converged", r.converged}});
  return arr;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "beta,lambda_over_beta,lip_phi_over_beta,iterations,"
                    "converged\n";
  for (const SweepRow& r : rows) {
    out += fmt_double(r.beta) + "," + fmt_double(r.lambda_over_beta) + "," +
           fmt_double(r.lip_phi_over_beta) + "," +
           std::to_string(r.iterations) + "," +
           (r.converged ? "true" : "false") + "\n";
  }
  return out;
}

json fixed_point_json(const SubshiftSpec& spec, const FixedPointResult& fp) {
  json j;
  j["lambda_plus"] = fp.lambda_plus;
  j["phi_plus"] = potential_json(spec, fp.phi_plus);
  j["residual"] = fp.residual;
  j["iterations"] = fp.iterations;
  j["converged"] = fp.converged;
  j["base_word"] = word_to_string(fp.base_word);
  return j;
}

json zerotemp_json(const SubshiftSpec& spec, const ZeroTempResult& zt) {
  json j;
  j["c_maxplus"] = zt.c_maxplus;
  if (zt.has_extrapolated) j["c_extrapolated"] = zt.c_extrapolated;
  j["v"] = potential_json(spec, zt.v);
  j["eigen_residual"] = zt.eigen_residual;
  j["converged"] = zt.converged;
  j["iterations"] = zt.iterations;
  j["base_word"] = word_to_string(zt.base_word);
  return j;
}

json transship_json(const SubshiftSpec& spec, const CostTable& costs,
                    const TransshipmentResult& ts) {
  WordTable y_words = enumerate_words(spec, costs.y_depth);
  WordTable x_words = enumerate_words(spec, costs.x_depth);
  json j;
  j["kappa"] = ts.kappa;
  j["marginal_gap"] = ts.marginal_gap;
  j["lp_iterations"] = ts.lp_iterations;
  json support = json::array();
  for (const auto& [iy, ix, mass] : ts.eta)
    support.push_back({{"y", word_to_string(y_words.words[iy])},
                       {"x", word_to_string(x_words.words[ix])},
                       {"mass", mass}});
  j["eta"] = std::move(support);
  return j;
}

struct Artifacts {
  // filename -> pretty-printed body; .csv entries are raw text
  std::vector<std::pair<std::string, std::string>> files;
  bool converged = true;

  void add_json(const std::string& name, const json& j) {
    files.emplace_back(name, j.dump(2) + "\n");
  }
  void add_text(const std::string& name, std::string body) {
    files.emplace_back(name, std::move(body));
  }
};

Artifacts do_validate(const RunConfig& cfg) {
  Artifacts out;
  WordTable y_words = enumerate_words(cfg.spec, cfg.potential.y_depth);
  WordTable x_words = enumerate_words(cfg.spec, cfg.potential.x_depth);
  json j;
  j["model"] = {{"r", cfg.spec.r},
                {"M", cfg.spec.m},
                {"lambda", cfg.spec.lambda}};
  j["potential"] = {{"y_depth", cfg.potential.y_depth},
                    {"x_depth", cfg.potential.x_depth},
                    {"masked", cfg.potential.masked},
                    {"y_words", y_words.size()},
                    {"x_words", x_words.size()},
                    {"sup_norm", pair_sup_norm(cfg.spec, cfg.potential)},
                    {"lip", pair_lip(cfg.spec, cfg.potential)}};
  j["base_word"] = word_to_string(cfg.base_word);
  j["valid"] = true;
  out.add_json("validate.json", j);
  return out;
}

Artifacts do_pressure(const RunConfig& cfg, int depth) {
  Artifacts out;
  XPotential zero{depth, std::vector<double>(
                             enumerate_words(cfg.spec, depth).size(), 0.0)};
  XPotential p = apply_G_plus(cfg.spec, cfg.potential, zero);
  WordTable y_words = enumerate_words(cfg.spec, cfg.potential.y_depth);
  json j;
  j["x_depth"] = depth;
  j["pressure_by_y_word"] = word_map(y_words, p.values);
  out.add_json("pressure.json", j);
  return out;
}

Artifacts do_equilibrium(const RunConfig& cfg, int depth) {
  Artifacts out;
  WordTable y_words = enumerate_words(cfg.spec, cfg.potential.y_depth);
  WordTable x_words = enumerate_words(cfg.spec, cfg.potential.x_depth);
  XPotential zero{depth, std::vector<double>(
                             enumerate_words(cfg.spec, depth).size(), 0.0)};
  json arr = json::array();
  for (std::size_t iy = 0; iy < y_words.size(); ++iy) {
    XPotential psi =
        y_section(cfg.spec, cfg.potential, y_words, x_words, iy, zero, depth);
    PressureResult pr = pressure(cfg.spec, psi);
    MarkovMeasure mu = equilibrium(cfg.spec, psi);
    double h = ks_entropy(cfg.spec, mu);
    double integral = integrate(cfg.spec, mu, psi);
    json entry;
    entry["y_word"] = word_to_string(y_words.words[iy]);
    entry["pressure"] = pr.pressure;
    entry["entropy"] = h;
    entry["integral"] = integral;
    entry["identity_residual"] = std::abs(integral + h - pr.pressure);
    entry["measure"] = measure_json(cfg.spec, mu);
    arr.push_back(std::move(entry));
  }
  json j;
  j["x_depth"] = depth;
  j["equilibria"] = std::move(arr);
  out.add_json("equilibrium.json", j);
  return out;
}

Artifacts do_effective(const RunConfig& cfg) {
  Artifacts out;
  FixedPointResult fp = solve_fixed_point(cfg.spec, cfg.potential,
                                          cfg.base_word, cfg.solve_options());
  json j = fixed_point_json(cfg.spec, fp);
  if (fp.converged) {
    EffectiveFamily fam = effective_family(cfg.spec, cfg.potential, fp);
    WordTable y_words = enumerate_words(cfg.spec, fam.y_depth);
    json arr = json::array();
    for (std::size_t iy = 0; iy < y_words.size(); ++iy)
      arr.push_back({{"y_word", word_to_string(y_words.words[iy])},
                     {"identity_residual", fam.residuals[iy]},
                     {"measure", measure_json(cfg.spec, fam.measures[iy])}});
    j["family"] = std::move(arr);
  }
  out.add_json("effective.json", j);
  out.converged = fp.converged;
  return out;
}

Artifacts do_sweep(const RunConfig& cfg) {
  Artifacts out;
  std::vector<SweepRow> rows = beta_sweep(cfg.spec, cfg.potential,
                                          cfg.beta_grid, cfg.base_word,
                                          cfg.solve_options());
  json j;
  j["rows"] = sweep_rows_json(rows);
  try {
    j["c_extrapolated"] = extrapolate_c(rows);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientRows) throw;
  }
  out.add_json("sweep.json", j);
  out.add_text("sweep.csv", sweep_csv(rows));
  for (const SweepRow& r : rows) out.converged = out.converged && r.converged;
  return out;
}

ZeroTempBundle zerotemp_bundle(const RunConfig& cfg) {
  return run_zero_temperature(cfg.spec, cfg.potential, cfg.beta_grid,
                              cfg.base_word, cfg.solve_options(), cfg.tol,
                              cfg.max_iter);
}

Artifacts do_zerotemp(const RunConfig& cfg) {
  Artifacts out;
  ZeroTempBundle bundle = zerotemp_bundle(cfg);
  json j = zerotemp_json(cfg.spec, bundle.result);
  j["sweep"] = sweep_rows_json(bundle.rows);
  out.add_json("zerotemp.json", j);
  out.add_text("sweep.csv", sweep_csv(bundle.rows));
  out.converged = bundle.result.converged;
  for (const SweepRow& r : bundle.rows)
    out.converged = out.converged && r.converged;
  return out;
}

Artifacts do_subaction(const RunConfig& cfg) {
  Artifacts out;
  ZeroTempResult zt = additive_eigen(cfg.spec, cfg.potential, cfg.base_word,
                                     cfg.tol, cfg.max_iter);
  std::vector<SubAction> subs = subactions_for(
      cfg.spec, cfg.potential, zt.v, zt.c_maxplus, cfg.base_word);
  WordTable y_words = enumerate_words(cfg.spec, cfg.potential.y_depth);
  const int d = std::max(cfg.potential.x_depth, zt.v.depth);
  BlockGraph g = block_graph(cfg.spec, d);
  json arr = json::array();
  bool all_ok = zt.converged;
  for (std::size_t iy = 0; iy < subs.size(); ++iy) {
    json entry;
    entry["y_word"] = word_to_string(y_words.words[iy]);
    entry["u"] = potential_json(cfg.spec, subs[iy].u);
    entry["calibration_residual"] = subs[iy].calibration_residual;
    entry["converged"] = subs[iy].converged;
    json eqs = json::array();
    for (const auto& [from, to] : subs[iy].equality_set)
      eqs.push_back({{"from", word_to_string(g.nodes.words[from])},
                     {"to", word_to_string(g.nodes.words[to])}});
    entry["equality_set"] = std::move(eqs);
    arr.push_back(std::move(entry));
    all_ok = all_ok && subs[iy].converged;
  }
  json j;
  j["c"] = zt.c_maxplus;
  j["v"] = potential_json(cfg.spec, zt.v);
  j["subactions"] = std::move(arr);
  out.add_json("subaction.json", j);
  out.converged = all_ok;
  return out;
}

Artifacts do_transship(const RunConfig& cfg) {
  Artifacts out;
  ZeroTempResult zt = additive_eigen(cfg.spec, cfg.potential, cfg.base_word,
                                     cfg.tol, cfg.max_iter);
  std::vector<SubAction> subs = subactions_for(
      cfg.spec, cfg.potential, zt.v, zt.c_maxplus, cfg.base_word);
  CostTable costs =
      build_cost_table(cfg.spec, cfg.potential, zt.v, zt.c_maxplus, subs);
  TransshipmentResult ts = transshipment_lp(cfg.spec, costs);
  json j = transship_json(cfg.spec, costs, ts);
  j["c_maxplus"] = zt.c_maxplus;
  j["cost_cycle"] = cost_cycle_value(cfg.spec, costs).value;
  out.add_json("transship.json", j);
  out.converged = zt.converged;
  return out;
}

json triple_json(const TripleReport& rep) {
  json j;
  j["c_maxplus"] = rep.c_maxplus;
  j["kappa"] = rep.kappa;
  j["cost_cycle"] = rep.cost_cycle;
  if (rep.has_extrapolated) j["c_extrapolated"] = rep.c_extrapolated;
  j["v_converged"] = rep.v_converged;
  j["ok"] = rep.ok;
  j["verdict"] = rep.verdict;
  return j;
}

Artifacts do_verify(const RunConfig& cfg) {
  Artifacts out;
  ZeroTempBundle bundle = zerotemp_bundle(cfg);
  TripleReport rep = verify_triple_equality(cfg.spec, cfg.potential,
                                            bundle.result, cfg.base_word);
  out.add_json("verify.json", triple_json(rep));
  out.converged = rep.ok;
  return out;
}

Artifacts do_report(const RunConfig& cfg) {
  Artifacts out;
  FixedPointResult fp = solve_fixed_point(cfg.spec, cfg.potential,
                                          cfg.base_word, cfg.solve_options());
  ZeroTempBundle bundle = zerotemp_bundle(cfg);
  TripleReport rep = verify_triple_equality(cfg.spec, cfg.potential,
                                            bundle.result, cfg.base_word);
  json j;
  j["fixed_point"] = fixed_point_json(cfg.spec, fp);
  j["zero_temperature"] = zerotemp_json(cfg.spec, bundle.result);
  j["triple_equality"] = triple_json(rep);
  j["transshipment"] = rep.transshipment.eta.empty()
                           ? json(nullptr)
                           : json({{"kappa", rep.transshipment.kappa},
                                   {"support_size",
                                    rep.transshipment.eta.size()}});
  out.add_json("report.json", j);
  out.add_text("sweep.csv", sweep_csv(bundle.rows));
  out.converged = fp.converged && rep.ok;
  return out;
}

void write_files(const fs::path& dir, const Artifacts& artifacts) {
  fs::create_directories(dir);
  for (const auto& [name, body] : artifacts.files) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f)
      throw Error(ErrorKind::ValidationError,
                  "cannot write " + (dir / name).string());
    f << body;
  }
}

json base_manifest(const std::string& subcommand, const RunConfig& cfg) {
  json m;
  m["tool"] = "effpot";
  m["version"] = "0.1.0";
  m["subcommand"] = subcommand;
  m["config_hash"] = hex64(fnv1a(canonical_config(cfg)));
  m["tolerances"] = {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}};
  auto now = std::chrono::system_clock::now().time_since_epoch();
  m["timestamp_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  return m;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "validate", "pressure",  "equilibrium", "effective", "sweep",
      "zerotemp", "subaction", "transship",   "verify",    "report"};
  return names;
}

int run(const std::string& subcommand, RunConfig config,
        const RunOverrides& overrides) {
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.tol) config.tol = *overrides.tol;
  if (overrides.max_iter) config.max_iter = *overrides.max_iter;
  int depth = config.potential.x_depth;
  if (overrides.depth) {
    if (*overrides.depth < config.potential.x_depth)
      throw Error(ErrorKind::ValidationError,
                  "--depth must be at least the potential x-depth");
    depth = *overrides.depth;
  }

  const fs::path dir(config.out_dir);
  json manifest = base_manifest(subcommand, config);
  auto t0 = std::chrono::steady_clock::now();
  try {
    Artifacts artifacts;
    if (subcommand == "validate") artifacts = do_validate(config);
    else if (subcommand == "pressure") artifacts = do_pressure(config, depth);
    else if (subcommand == "equilibrium")
      artifacts = do_equilibrium(config, depth);
    else if (subcommand == "effective") artifacts = do_effective(config);
    else if (subcommand == "sweep") artifacts = do_sweep(config);
    else if (subcommand == "zerotemp") artifacts = do_zerotemp(config);
    else if (subcommand == "subaction") artifacts = do_subaction(config);
    else if (subcommand == "transship") artifacts = do_transship(config);
    else if (subcommand == "verify") artifacts = do_verify(config);
    else if (subcommand == "report") artifacts = do_report(config);
    else
      throw Error(ErrorKind::ValidationError,
                  "unknown subcommand \"" + subcommand + "\"");

    auto t1 = std::chrono::steady_clock::now();
    manifest["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    manifest["converged"] = artifacts.converged;
    int code = artifacts.converged ? kExitOk : kExitNoConvergence;
    manifest["exit_code"] = code;
    json names = json::array();
    for (const auto& [name, body] : artifacts.files) names.push_back(name);
    manifest["artifacts"] = std::move(names);
    artifacts.add_json("manifest.json", manifest);
    write_files(dir, artifacts);
    return code;
  } catch (const Error& e) {
    int code =
        e.kind() == ErrorKind::NoConvergence ? kExitNoConvergence : kExitUsage;
    auto t1 = std::chrono::steady_clock::now();
    manifest["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    manifest["converged"] = false;
    manifest["exit_code"] = code;
    Artifacts artifacts;
    artifacts.add_json("error.json", json{{"kind", to_string(e.kind())},
                                          {"message", e.what()}});
    artifacts.add_json("manifest.json", manifest);
    write_files(dir, artifacts);
    return code;
  }
}

}  // namespace effpot
