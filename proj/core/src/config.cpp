#include "effpot/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "effpot/zerotemp.hpp"

namespace effpot {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw Error(ErrorKind::ValidationError,
                  path + "." + key + ": unknown key");
}

const json& require(const json& j, const std::string& path,
                    const std::string& key) {
  if (!j.contains(key))
    throw Error(ErrorKind::ValidationError,
                path + "." + key + ": missing required field");
  return j.at(key);
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array())
    throw Error(ErrorKind::ValidationError, path + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number())
      throw Error(ErrorKind::ValidationError, path + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

SubshiftSpec parse_model(const json& j) {
  check_keys(j, "model", {"r", "M", "lambda"});
  int r = require(j, "model", "r").get<int>();
  std::vector<std::vector<int>> m;
  for (const auto& row : require(j, "model", "M"))
    m.push_back(row.get<std::vector<int>>());
  double lambda = j.value("lambda", 0.5);
  try {
    return build_sft(r, m, lambda);
  } catch (const Error& e) {
    std::string field =
        e.kind() == ErrorKind::BadLambda ? "model.lambda" : "model.M";
    std::string reason = e.kind() == ErrorKind::Reducible  ? "reducible"
                         : e.kind() == ErrorKind::NonSymmetric ? "non-symmetric"
                         : e.kind() == ErrorKind::BadLambda
                             ? "out of (0,1)"
                             : e.what();
    throw Error(ErrorKind::ValidationError, field + ": " + reason);
  }
}

PairPotential parse_potential(const SubshiftSpec& spec, const json& j) {
  std::string type = require(j, "potential", "type").get<std::string>();
  bool masked = j.value("masked", true);
  if (type == "table") {
    check_keys(j, "potential",
               {"type", "y_depth", "x_depth", "masked", "entries"});
    int m = require(j, "potential", "y_depth").get<int>();
    int n = require(j, "potential", "x_depth").get<int>();
    WordTable yw = enumerate_words(spec, m);
    WordTable xw = enumerate_words(spec, n);
    std::vector<std::vector<double>> table(
        yw.size(), std::vector<double>(xw.size()));
    std::vector<std::vector<char>> seen(yw.size(),
                                        std::vector<char>(xw.size(), 0));
    for (const auto& entry : require(j, "potential", "entries")) {
      check_keys(entry, "potential.entries[]", {"y", "x", "v"});
      Word y = word_from_string(
          require(entry, "potential.entries[]", "y").get<std::string>());
      Word x = word_from_string(
          require(entry, "potential.entries[]", "x").get<std::string>());
      double v = require(entry, "potential.entries[]", "v").get<double>();
      std::size_t iy, ix;
      try {
        iy = yw.index_of(y);
        ix = xw.index_of(x);
      } catch (const Error&) {
        throw Error(ErrorKind::ValidationError,
                    "potential.entries: word pair (" + word_to_string(y) +
                        "," + word_to_string(x) + ") is not allowed at the "
                        "declared depths");
      }
      table[iy][ix] = v;
      seen[iy][ix] = 1;
    }
    for (std::size_t iy = 0; iy < yw.size(); ++iy)
      for (std::size_t ix = 0; ix < xw.size(); ++ix)
        if (!seen[iy][ix])
          throw Error(ErrorKind::MissingEntry,
                      "potential.entries: pair (" +
                          word_to_string(yw.words[iy]) + "," +
                          word_to_string(xw.words[ix]) + ") absent");
    return make_pair_potential(spec, m, n, table, masked);
  }
  if (type == "builtin") {
    check_keys(j, "potential",
               {"type", "name", "masked", "values", "a1", "a2", "eps"});
    std::string name = require(j, "potential", "name").get<std::string>();
    std::vector<double> xs, ys;
    double eps = j.value("eps", 1.0);
    if (j.contains("values")) xs = number_list(j["values"], "potential.values");
    if (j.contains("a1")) xs = number_list(j["a1"], "potential.a1");
    if (j.contains("a2")) ys = number_list(j["a2"], "potential.a2");
    if (name == "y_only" && j.contains("values")) {
      ys = xs;
      xs.clear();
    }
    return builtin_potential(spec, name, xs, ys, eps, masked);
  }
  throw Error(ErrorKind::ValidationError,
              "potential.type: expected \"table\" or \"builtin\", got \"" +
                  type + "\"");
}

}  // namespace

PairPotential builtin_potential(const SubshiftSpec& spec,
                                const std::string& name,
                                const std::vector<double>& x_values,
                                const std::vector<double>& y_values,
                                double eps, bool masked) {
  const std::size_t r = static_cast<std::size_t>(spec.r);
  auto letters = [&](const std::vector<double>& vals,
                     const std::string& what) {
    if (vals.size() != r)
      throw Error(ErrorKind::ValidationError,
                  "potential." + what + ": expected " + std::to_string(r) +
                      " per-letter values");
    return vals;
  };
  std::vector<std::vector<double>> table(r, std::vector<double>(r, 0.0));
  if (name == "zero") {
    // all zeros
  } else if (name == "x_only") {
    auto v = letters(x_values, "values");
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) table[i][j] = v[j];
  } else if (name == "y_only") {
    auto v = letters(y_values, "values");
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) table[i][j] = v[i];
  } else if (name == "diagonal") {
    for (std::size_t i = 0; i < r; ++i) table[i][i] = eps;
  } else if (name == "sum") {
    auto v1 = letters(x_values, "a1");
    auto v2 = letters(y_values, "a2");
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) table[i][j] = v1[j] + v2[i];
  } else {
    throw Error(ErrorKind::ValidationError,
                "potential.name: unknown builtin \"" + name + "\"");
  }
  return make_pair_potential(spec, 1, 1, table, masked);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  check_keys(j, "config", {"model", "potential", "solver", "sweep", "output"});

  RunConfig config;
  config.spec = parse_model(require(j, "config", "model"));
  config.potential =
      parse_potential(config.spec, require(j, "config", "potential"));

  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, "solver", {"tol", "max_iter", "base_word", "accel"});
    config.tol = s.value("tol", config.tol);
    config.max_iter = s.value("max_iter", config.max_iter);
    config.accel = s.value("accel", false);
    if (s.contains("base_word")) {
      config.base_word = word_from_string(s["base_word"].get<std::string>());
      WordTable yw = enumerate_words(config.spec, config.potential.y_depth);
      try {
        yw.index_of(config.base_word);
      } catch (const Error&) {
        throw Error(ErrorKind::ValidationError,
                    "solver.base_word: not an allowed y-word of depth " +
                        std::to_string(config.potential.y_depth));
      }
    }
    if (!(config.tol > 0.0))
      throw Error(ErrorKind::ValidationError, "solver.tol: must be positive");
  }
  if (config.base_word.empty())
    config.base_word = default_base_word(config.spec, config.potential);

  config.beta_grid = default_beta_grid();
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep", {"beta_grid"});
    if (s.contains("beta_grid"))
      config.beta_grid = number_list(s["beta_grid"], "sweep.beta_grid");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"dir", "formats"});
    config.out_dir = o.value("dir", config.out_dir);
    if (o.contains("formats"))
      config.formats = o["formats"].get<std::vector<std::string>>();
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::ParseError, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const RunConfig& config) {
  json j;
  j["model"]["r"] = config.spec.r;
  j["model"]["M"] = config.spec.m;
  j["model"]["lambda"] = config.spec.lambda;
  j["potential"]["y_depth"] = config.potential.y_depth;
  j["potential"]["x_depth"] = config.potential.x_depth;
  j["potential"]["masked"] = config.potential.masked;
  j["potential"]["values"] = config.potential.values;
  j["solver"]["tol"] = config.tol;
  j["solver"]["max_iter"] = config.max_iter;
  j["solver"]["base_word"] = word_to_string(config.base_word);
  j["solver"]["accel"] = config.accel;
  j["sweep"]["beta_grid"] = config.beta_grid;
  return j.dump();
}

}  // namespace effpot
