#pragma once

#include <string>
#include <vector>

#include "fcl/conslaw.hpp"

namespace fcl {

/// Exit statuses shared by the scenario runner and the command-line tool.
enum class ExitCode : int { Ok = 0, Validation = 2, Solver = 3, Conservation = 4 };

/// Where the solution fields come from.
///
/// `source` is "exact" (closed form sampled on each grid) or "solver" (the
/// forward solver fed with the initial and boundary data of the exact
/// solution, plus `boundary_bump * t` added to the trace at x_lo).
struct SolutionSpec {
  std::string source = "exact";
  std::string name = "linear";  // linear | rl_power | stationary | rl_separable
  double lambda = 1.0;          // wave number of the linear mode
  double h_lambda = 2.0;        // wave number of the linear solution h fed to Xinf
  double c = 1.0;               // amplitude of the RL power mode
  double a = 0.5, b = 1.0;      // K(u) = a x + b profiles
  double boundary_bump = 0.0;

  bool operator==(const SolutionSpec&) const = default;
};

struct Tolerances {
  double exclude_frac = 0.05;   // end exclusion for vectors singular at T
  double initial_layer = 0.05;
  double threshold = 1.3;       // minimum coarse/fine Linf ratio
  double abs_tol = 1e-9;        // rows below this Linf are not ratio-checked

  bool operator==(const Tolerances&) const = default;
};

struct ScenarioConfig {
  DerivativeKind kind = DerivativeKind::Caputo;
  double alpha = 0.5;
  double T = 1.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  Diffusivity diffusivity;
  SolutionSpec solution;
  std::vector<int> grids{64, 128, 256};  // time steps per refinement level
  int n_x = 0;                           // 0: space steps follow the time steps
  /// Catalog ids, or "Noether:<symmetry>:<regime>:<c1>;<c2>;<c3>;<c4>".
  std::vector<std::string> vectors;
  /// "<regime>:<c1>;<c2>;<c3>;<c4>" for catalog vectors that take one.
  std::string substitution;
  std::string out;
  Tolerances tol;
  bool allow_conditional = false;
  bool flux_rows = false;  // also emit the flux-balance rows

  FractionalSpec spec() const { return FractionalSpec::make(kind, alpha, T); }
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses a JSON document. Throws ParseError (with line and column) on
/// malformed text and ValidationError("<key>: ...") on bad values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);
/// Throws ValidationError naming the offending key.
void validate_config(const ScenarioConfig& cfg);

/// Comma-separated grid list, e.g. "64,128,256".
std::vector<int> parse_grid_list(const std::string& s);

struct VerifyResult {
  ExitCode status = ExitCode::Ok;
  std::string message;  // first failure, with scenario context
  std::vector<ResidualReport> rows;

  /// CSV body preceded by `comment` lines.
  std::string csv(const std::string& comment = "") const;
};

/// Solution field of the scenario on one refinement level.
GridFunction scenario_solution(const ScenarioConfig& cfg, int n_steps);

/// Evaluates every selected vector on every grid. Rows are ordered by
/// (grid, vector id) regardless of how the work was scheduled.
VerifyResult run_verify(const ScenarioConfig& cfg);

struct CatalogQuery {
  DerivativeKind kind = DerivativeKind::Caputo;
  double alpha = 0.5;
  Diffusivity diffusivity;
  bool allow_conditional = false;
};

/// Admitted generators, substitutions and the generator/vector table.
std::string run_catalog(const CatalogQuery& q);

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The acceptance matrix, one entry per criterion.
std::vector<CriterionResult> run_acceptance();

}  // namespace fcl
