#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fcl/errors.hpp"
#include "fcl/scenario.hpp"

namespace {

using fcl::ExitCode;

struct Overrides {
  std::string config;
  std::string out;
  std::string grids;
  std::optional<double> exclude_frac;
  std::optional<double> threshold;
};

void add_scenario_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output CSV path (default: config 'out', else stdout)");
  cmd->add_option("--grids", o.grids, "comma-separated time-step counts, e.g. 64,128,256");
  cmd->add_option("--exclude-frac", o.exclude_frac, "end exclusion for vectors singular at T");
  cmd->add_option("--threshold", o.threshold, "minimum convergence ratio");
}

fcl::ScenarioConfig load(const Overrides& o) {
  fcl::ScenarioConfig cfg = fcl::load_config(o.config);
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.grids.empty()) cfg.grids = fcl::parse_grid_list(o.grids);
  if (o.exclude_frac) cfg.tol.exclude_frac = *o.exclude_frac;
  if (o.threshold) cfg.tol.threshold = *o.threshold;
  fcl::validate_config(cfg);
  return cfg;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream os;
  os << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw fcl::ValidationError("out: cannot write '" + path + "'");
  os << text;
}

int cmd_verify(const Overrides& o) {
  const fcl::ScenarioConfig cfg = load(o);
  const fcl::VerifyResult r = fcl::run_verify(cfg);
  if (r.status == ExitCode::Ok || r.status == ExitCode::Conservation) {
    std::ostringstream comment;
    comment << "fcl verify " << timestamp() << "\nconfig " << o.config;
    if (!r.message.empty()) comment << "\nfailed: " << r.message;
    emit(cfg.out, r.csv(comment.str()));
  }
  if (!r.message.empty()) std::cerr << "verify: " << r.message << '\n';
  return static_cast<int>(r.status);
}

int cmd_solve(const Overrides& o) {
  const fcl::ScenarioConfig cfg = load(o);
  const int n = cfg.grids.back();
  const fcl::GridFunction u = fcl::scenario_solution(cfg, n);
  std::ostringstream os;
  fcl::write_grid_csv(os, u);
  emit(cfg.out, os.str());
  return 0;
}

int cmd_selftest() {
  int failed = 0;
  for (const auto& c : fcl::run_acceptance()) {
    std::cout << "criterion " << std::setw(2) << c.number << (c.pass ? " PASS  " : " FAIL  ") << c.name << " | "
              << c.detail << '\n';
    failed += c.pass ? 0 : 1;
  }
  std::cout << failed << " of 12 criteria failed\n";
  return failed == 0 ? 0 : static_cast<int>(ExitCode::Conservation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservation laws of time-fractional diffusion equations: solve, verify, list"};
  app.require_subcommand(1);

  Overrides solve_o, verify_o;
  auto* solve = app.add_subcommand("solve", "write the scenario solution on the finest grid as CSV");
  add_scenario_flags(solve, solve_o);
  auto* verify = app.add_subcommand("verify", "evaluate the selected conserved vectors and write the residual report");
  add_scenario_flags(verify, verify_o);

  fcl::CatalogQuery q;
  std::string kind = "caputo", family = "constant";
  double beta = 1.0, k0 = 1.0;
  std::string catalog_config;
  auto* catalog = app.add_subcommand("catalog", "list symmetries, substitutions and conserved vectors");
  catalog->add_option("--config", catalog_config, "take kind, alpha and diffusivity from a scenario file")
      ->check(CLI::ExistingFile);
  catalog->add_option("--kind", kind, "caputo or rl");
  catalog->add_option("--alpha", q.alpha, "order in (0,2), not 1");
  catalog->add_option("--diffusivity", family, "constant, power or exponential");
  catalog->add_option("--beta", beta, "exponent of the power family");
  catalog->add_option("--k0", k0, "value of the constant family");
  catalog->add_flag("--allow-conditional", q.allow_conditional, "include the conditional X4 generator for Caputo");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Validation);
  }

  try {
    if (*solve) return cmd_solve(solve_o);
    if (*verify) return cmd_verify(verify_o);
    if (*selftest) return cmd_selftest();
    if (*catalog) {
      if (!catalog_config.empty()) {
        const fcl::ScenarioConfig cfg = fcl::load_config(catalog_config);
        q.kind = cfg.kind;
        q.alpha = cfg.alpha;
        q.diffusivity = cfg.diffusivity;
        q.allow_conditional = q.allow_conditional || cfg.allow_conditional;
      } else {
        q.kind = fcl::parse_kind(kind);
        if (family == "constant") q.diffusivity = fcl::Diffusivity::constant(k0);
        else if (family == "power") q.diffusivity = fcl::Diffusivity::power(beta);
        else if (family == "exponential") q.diffusivity = fcl::Diffusivity::exponential();
        else throw fcl::ValidationError("diffusivity: unknown family '" + family + "'");
      }
      std::cout << fcl::run_catalog(q);
      return 0;
    }
  } catch (const fcl::ParseError& e) {
    std::cerr << "config: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Validation);
  } catch (const fcl::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Validation);
  } catch (const fcl::SolverError& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Solver);
  } catch (const fcl::ConvergenceError& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Solver);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Validation);
  }
  return 0;
}
