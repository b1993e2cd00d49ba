// effpot: command-line front end for the effective-potential toolkit.
//
// Usage: effpot <subcommand> --config <path> [--out <dir>] [--depth k]
//                [--tol x] [--max-iter n]
//
// Exit codes: 0 success, 1 usage/configuration error, 2 numerical
// non-convergence (artifacts are still written, flagged in the manifest).

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "effpot/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Effective potentials, zero-temperature limits and "
               "ergodic transshipment on subshifts of finite type"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int depth = 0;
  double tol = 0.0;
  std::size_t max_iter = 0;

  for (const std::string& name : effpot::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--depth", depth, "working x-depth override");
    sub->add_option("--tol", tol, "solver tolerance override");
    sub->add_option("--max-iter", max_iter, "solver iteration cap override");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    effpot::RunConfig config = effpot::parse_config_file(config_path);
    effpot::RunOverrides overrides;
    if (sub->count("--out")) overrides.out_dir = out_dir;
    if (sub->count("--depth")) overrides.depth = depth;
    if (sub->count("--tol")) overrides.tol = tol;
    if (sub->count("--max-iter")) overrides.max_iter = max_iter;
    int code = effpot::run(sub->get_name(), std::move(config), overrides);
    if (code == effpot::kExitNoConvergence)
      std::fprintf(stderr,
                   "effpot: not converged; artifacts written with flags\n");
    return code;
  } catch (const effpot::Error& e) {
    std::fprintf(stderr, "effpot: %s\n", e.what());
    return e.kind() == effpot::ErrorKind::NoConvergence
               ? effpot::kExitNoConvergence
               : effpot::kExitUsage;
  }
}
