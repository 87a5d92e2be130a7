#include "fcl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fcl/errors.hpp"
#include "fcl/specialfn.hpp"

namespace fcl {

namespace {

using json = nlohmann::json;

// -- config reading ----------------------------------------------------------

[[noreturn]] void bad(const std::string& key, const std::string& msg) { throw ValidationError(key + ": " + msg); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!known) bad(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

double get_number(const json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) bad(path, "expected true or false");
  return v.get<bool>();
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad(path, "expected an integer");
  return v.get<int>();
}

Diffusivity read_diffusivity(const json& v) {
  std::string family;
  json obj = json::object();
  if (v.is_string()) {
    family = v.get<std::string>();
  } else if (v.is_object()) {
    check_keys(v, "diffusivity", {"family", "k0", "beta"});
    if (!v.contains("family")) bad("diffusivity.family", "missing");
    family = get_string(v, "family", "diffusivity.family", "");
    obj = v;
  } else {
    bad("diffusivity", "expected a family name or an object");
  }
  if (family == "constant") {
    if (obj.contains("beta")) bad("diffusivity.beta", "only used by the power family");
    return Diffusivity::constant(get_number(obj, "k0", "diffusivity.k0", 1.0));
  }
  if (obj.contains("k0")) bad("diffusivity.k0", "only used by the constant family");
  if (family == "power") {
    if (!obj.contains("beta")) bad("diffusivity.beta", "required by the power family");
    return Diffusivity::power(get_number(obj, "beta", "diffusivity.beta", 0.0));
  }
  if (family == "exponential") {
    if (obj.contains("beta")) bad("diffusivity.beta", "only used by the power family");
    return Diffusivity::exponential();
  }
  bad("diffusivity.family", "unknown family '" + family + "' (constant, power, exponential)");
}

json write_diffusivity(const Diffusivity& d) {
  switch (d.family) {
    case DiffusivityFamily::Constant: return {{"family", "constant"}, {"k0", d.k0}};
    case DiffusivityFamily::Power: return {{"family", "power"}, {"beta", d.beta}};
    case DiffusivityFamily::Exponential: return {{"family", "exponential"}};
  }
  return {};
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the byte after the offending character
  return {line, std::max(1, col - 1)};
}

// -- substitutions and vector ids ----------------------------------------------

struct SubstitutionSel {
  AdjointRegime regime = AdjointRegime::RL_sub;
  std::array<double, 4> c{};
};

std::array<double, 4> parse_constants(const std::string& s) {
  std::array<double, 4> c{};
  std::stringstream ss(s);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ';')) {
    if (k == 4) throw ValidationError("at most four constants");
    std::size_t used = 0;
    try {
      c[k] = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(c[k]))
      throw ValidationError("constant '" + item + "' is not a number");
    ++k;
  }
  if (k == 0) throw ValidationError("no constants given");
  return c;
}

SubstitutionSel parse_substitution(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("expected <regime>:<c1>;<c2>;<c3>;<c4>");
  return {parse_adjoint_regime(s.substr(0, colon)), parse_constants(s.substr(colon + 1))};
}

bool is_noether_id(const std::string& id) { return id.rfind("Noether:", 0) == 0; }

ConservedVectorEval noether_from_id(const std::string& id, const ScenarioConfig& cfg) {
  const std::string rest = id.substr(8);
  const auto colon = rest.find(':');
  if (colon == std::string::npos) throw ValidationError("expected Noether:<symmetry>:<regime>:<constants>");
  const SymmetryId sid = parse_symmetry_id(rest.substr(0, colon));
  const SubstitutionSel sel = parse_substitution(rest.substr(colon + 1));
  const FractionalSpec spec = cfg.spec();
  const Symmetry s = find_symmetry(sid, cfg.kind, cfg.alpha, cfg.diffusivity, {cfg.allow_conditional});
  return noether_vector(s, adjoint_substitution(sel.regime, spec, sel.c));
}

ConservedVectorEval vector_for(const std::string& id, const ScenarioConfig& cfg) {
  if (is_noether_id(id)) return noether_from_id(id, cfg);
  return catalog_vector(id, cfg.spec(), cfg.diffusivity);
}

bool uses_xinf(const std::string& id) {
  return id.find("Xinf") != std::string::npos;
}

// -- solutions -----------------------------------------------------------------

bool integer_exponent(double p) { return p >= 0.0 && std::fabs(p - std::round(p)) < 1e-12; }

// Linear interpolation of uniform samples.
double lookup(const std::vector<double>& f, double lo, double step, double x) {
  const double s = (x - lo) / step;
  const int n = static_cast<int>(f.size()) - 1;
  const int i = std::clamp(static_cast<int>(std::floor(s)), 0, std::max(0, n - 1));
  if (n == 0) return f[0];
  const double w = std::clamp(s - i, 0.0, 1.0);
  if (w < 1e-12) return f[i];
  if (w > 1.0 - 1e-12) return f[i + 1];
  return (1.0 - w) * f[i] + w * f[i + 1];
}

GridFunction exact_field(const ScenarioConfig& cfg, const TimeGrid& tg, const SpaceGrid& xg) {
  const auto& s = cfg.solution;
  if (s.name == "linear") return exact_linear_separable(cfg.spec(), s.lambda, tg, xg);
  if (s.name == "rl_power") return exact_rl_power_mode(cfg.alpha, s.c, tg, xg);
  if (s.name == "stationary") return exact_stationary_caputo(cfg.diffusivity, s.a, s.b, tg, xg);
  if (s.name == "rl_separable") return exact_rl_separable_power(cfg.alpha, cfg.diffusivity.beta, s.a, s.b, tg, xg);
  bad("solution.name", "unknown solution '" + s.name + "'");
}

/// Splits an exact field into singular modes and the regular remainder r.
struct Split {
  std::vector<FieldTerm> singular;
  GridFunction regular;  // dense
  std::vector<double> r1;  // r_t(0, x_j)
};

Split split_field(const GridFunction& e, DerivativeKind kind) {
  const TimeGrid& tg = e.time_grid();
  Split out;
  out.regular = GridFunction(tg, e.space_grid());
  for (int i = 0; i < e.nt(); ++i)
    for (int j = 0; j < e.nx(); ++j) out.regular(i, j) = e(i, j);
  out.r1.assign(e.nx(), 0.0);
  const double h = tg.h();
  for (int j = 0; j < e.nx(); ++j) out.r1[j] = (-3.0 * e(0, j) + 4.0 * e(1, j) - e(2, j)) / (2.0 * h);
  for (const FieldTerm& term : e.terms()) {
    const bool left = term.anchor == Anchor::Left;
    if (kind == DerivativeKind::RiemannLiouville && left && !integer_exponent(term.exponent)) {
      out.singular.push_back(term);
      continue;
    }
    if (term.exponent < 0.0) throw ValidationError("solution: singular term without an RL singular mode");
    for (int i = 0; i < e.nt(); ++i) {
      const double t = tg.t(i);
      const double w = left ? std::pow(t, term.exponent) : std::pow(tg.T - t, term.exponent);
      for (int j = 0; j < e.nx(); ++j) out.regular(i, j) += term.coef[j] * w;
    }
    // d/dt at t = 0; exponents in (0,1) have no finite slope and only enter the
    // diffusion-wave data, where such exact solutions are not offered
    for (int j = 0; j < e.nx(); ++j) {
      if (left && term.exponent == 1.0) out.r1[j] += term.coef[j];
      if (!left) out.r1[j] -= term.coef[j] * term.exponent * std::pow(tg.T, term.exponent - 1.0);
    }
  }
  return out;
}

struct LevelData {
  GridFunction u;
  std::function<double(double)> u1;
  std::optional<GridFunction> h;
};

LevelData level_data(const ScenarioConfig& cfg, int n_steps) {
  const FractionalSpec spec = cfg.spec();
  const TimeGrid tg = TimeGrid::make(cfg.T, n_steps);
  const SpaceGrid xg = SpaceGrid::make(cfg.x_lo, cfg.x_hi, cfg.n_x > 0 ? cfg.n_x : n_steps);
  const GridFunction e = exact_field(cfg, tg, xg);
  const Split sp = split_field(e, cfg.kind);
  const double x_lo = xg.x_lo, dx = xg.dx(), h = tg.h();

  LevelData out;
  auto r1 = std::make_shared<std::vector<double>>(sp.r1);
  out.u1 = [r1, x_lo, dx](double x) { return lookup(*r1, x_lo, dx, x); };
  if (cfg.diffusivity.linear()) out.h = exact_linear_separable(spec, cfg.solution.h_lambda, tg, xg);

  if (cfg.solution.source == "exact") {
    out.u = e;
    return out;
  }

  TFDEProblem p;
  p.spec = spec;
  p.diffusivity = cfg.diffusivity;
  p.x_lo = cfg.x_lo;
  p.x_hi = cfg.x_hi;
  for (const FieldTerm& term : sp.singular) {
    auto coef = std::make_shared<std::vector<double>>(term.coef);
    p.singular.push_back({term.exponent, [coef, x_lo, dx](double x) { return lookup(*coef, x_lo, dx, x); }});
  }
  auto row0 = std::make_shared<std::vector<double>>(e.nx());
  auto lo = std::make_shared<std::vector<double>>(e.nt());
  auto hi = std::make_shared<std::vector<double>>(e.nt());
  for (int j = 0; j < e.nx(); ++j) (*row0)[j] = sp.regular(0, j);
  for (int i = 0; i < e.nt(); ++i) {
    (*lo)[i] = sp.regular(i, 0);
    (*hi)[i] = sp.regular(i, e.nx() - 1);
  }
  const double bump = cfg.solution.boundary_bump;
  p.r0 = [row0, x_lo, dx](double x) { return lookup(*row0, x_lo, dx, x); };
  if (spec.n() == 2) p.r1 = out.u1;
  p.r_lo = [lo, h, bump](double t) { return lookup(*lo, 0.0, h, t) + bump * t; };
  p.r_hi = [hi, h](double t) { return lookup(*hi, 0.0, h, t); };
  out.u = solve_nonlinear(p, tg, xg.n_x);
  return out;
}

// -- formatting ----------------------------------------------------------------

std::string fmt_num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string substitution_formula(AdjointRegime r, DerivativeKind kind) {
  switch (r) {
    case AdjointRegime::RL_sub: return "v = c1 + c2 x";
    case AdjointRegime::RL_wave: return "v = c1 + c2 x + (c3 + c4 x) t";
    case AdjointRegime::Caputo_sub: return "v = (T-t)^(alpha-1) (c1 + c2 x)";
    case AdjointRegime::Caputo_wave: return "v = (T-t)^(alpha-2) (c1 + c3 x) + (T-t)^(alpha-1) (c2 + c4 x)";
    case AdjointRegime::Linear_particular:
      return kind == DerivativeKind::RiemannLiouville ? "v = c1 t^(alpha-1) x" : "v = c1 t x";
  }
  return "";
}

std::string cell_text(const Correspondence& c) {
  if (c.kind == Correspondence::Kind::NotListed) return "-";
  if (c.kind == Correspondence::Kind::Zero) return "0";
  std::string s;
  for (const auto& id : c.ids) {
    if (!s.empty()) s += ',';
    const auto v = id.find("_v");
    s += id.rfind("Table", 0) == 0 && v != std::string::npos ? id.substr(v + 2) : id;
  }
  return s;
}

}  // namespace

// -- config --------------------------------------------------------------------

std::vector<int> parse_grid_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) bad("grids", "'" + item + "' is not an integer");
    out.push_back(n);
  }
  if (out.empty()) bad("grids", "empty list");
  return out;
}

void validate_config(const ScenarioConfig& cfg) {
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) bad("T", "must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0)) bad("alpha", "must lie in (0,2)");
  if (cfg.alpha == 1.0) bad("alpha", "alpha = 1 is excluded");
  if (!(std::isfinite(cfg.x_lo) && std::isfinite(cfg.x_hi) && cfg.x_lo < cfg.x_hi))
    bad("domain", "need finite x_lo < x_hi");

  const Diffusivity& d = cfg.diffusivity;
  if (d.family == DiffusivityFamily::Constant && !(d.k0 > 0.0 && std::isfinite(d.k0)))
    bad("diffusivity.k0", "must be positive");
  if (d.family == DiffusivityFamily::Power && (!std::isfinite(d.beta) || d.beta == 0.0 || d.beta == -1.0))
    bad("diffusivity.beta", "must be finite and differ from 0 and -1");

  const SolutionSpec& s = cfg.solution;
  if (s.source != "exact" && s.source != "solver") bad("solution.source", "expected 'exact' or 'solver'");
  const bool rl = cfg.kind == DerivativeKind::RiemannLiouville;
  if (s.name == "linear") {
    if (!(d.linear() && d.k0 == 1.0)) bad("solution.name", "the linear mode needs diffusivity constant with k0 = 1");
    if (!std::isfinite(s.lambda) || s.lambda == 0.0) bad("solution.lambda", "must be finite and nonzero");
  } else if (s.name == "rl_power") {
    if (!rl) bad("solution.name", "rl_power needs kind rl");
    if (!std::isfinite(s.c)) bad("solution.c", "must be finite");
  } else if (s.name == "stationary" || s.name == "rl_separable") {
    if (s.name == "stationary" && rl) bad("solution.name", "stationary needs kind caputo");
    if (s.name == "rl_separable" && !(rl && d.family == DiffusivityFamily::Power))
      bad("solution.name", "rl_separable needs kind rl and a power diffusivity");
    for (double x : {cfg.x_lo, cfg.x_hi}) {
      try {
        d.K_inv(s.a * x + s.b);
      } catch (const DomainError& e) {
        bad("solution.a", std::string("a x + b leaves the image of K: ") + e.what());
      }
    }
  } else {
    bad("solution.name", "unknown solution '" + s.name + "' (linear, rl_power, stationary, rl_separable)");
  }
  if (!std::isfinite(s.boundary_bump)) bad("solution.boundary_bump", "must be finite");
  if (s.boundary_bump != 0.0 && s.source != "solver") bad("solution.boundary_bump", "only used with source solver");
  if (!std::isfinite(s.h_lambda) || s.h_lambda == 0.0) bad("solution.h_lambda", "must be finite and nonzero");

  if (cfg.grids.empty()) bad("grids", "empty list");
  for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
    if (cfg.grids[k] < 4) bad("grids", "each grid needs at least 4 steps");
    if (k > 0 && cfg.grids[k] <= cfg.grids[k - 1]) bad("grids", "must be strictly increasing");
  }
  if (cfg.n_x != 0 && cfg.n_x < 4) bad("n_x", "must be 0 (follow the grid) or at least 4");

  if (!cfg.substitution.empty()) {
    try {
      const SubstitutionSel sel = parse_substitution(cfg.substitution);
      adjoint_substitution(sel.regime, cfg.spec(), sel.c);
    } catch (const ValidationError& e) {
      bad("substitution", e.what());
    }
  }
  std::set<std::string> seen;
  for (std::size_t k = 0; k < cfg.vectors.size(); ++k) {
    const std::string key = "vectors[" + std::to_string(k) + "]";
    const std::string& id = cfg.vectors[k];
    ConservedVectorEval ev;
    try {
      ev = vector_for(id, cfg);
    } catch (const ValidationError& e) {
      bad(key, e.what());
    }
    if (!seen.insert(ev.provenance).second) bad(key, "duplicate vector '" + id + "'");
    if (ev.needs_substitution && cfg.substitution.empty()) bad("substitution", "required by " + id);
    if (uses_xinf(id) && !(d.linear() && d.k0 == 1.0)) bad(key, "Xinf vectors need diffusivity constant with k0 = 1");
  }

  const Tolerances& t = cfg.tol;
  if (!(t.exclude_frac >= 0.0 && t.exclude_frac < 0.5)) bad("tolerances.exclude_frac", "must lie in [0, 0.5)");
  if (!(t.initial_layer >= 0.0 && t.initial_layer < 0.5)) bad("tolerances.initial_layer", "must lie in [0, 0.5)");
  if (!(t.threshold > 0.0) || !std::isfinite(t.threshold)) bad("tolerances.threshold", "must be positive");
  if (!(t.abs_tol >= 0.0) || !std::isfinite(t.abs_tol)) bad("tolerances.abs_tol", "must be nonnegative");
}

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    const auto at = msg.find("column");
    if (at != std::string::npos && msg.find(": ", at) != std::string::npos) msg = msg.substr(msg.find(": ", at) + 2);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg, line, col);
  }
  if (!doc.is_object()) throw ParseError("line 1, column 1: the document must be a JSON object", 1, 1);
  check_keys(doc, "",
             {"kind", "alpha", "T", "domain", "diffusivity", "solution", "grids", "n_x", "vectors", "substitution",
              "out", "tolerances", "allow_conditional", "flux_rows"});

  ScenarioConfig cfg;
  for (const char* key : {"kind", "alpha", "diffusivity"})
    if (!doc.contains(key)) bad(key, "missing");
  const std::string kind = get_string(doc, "kind", "kind", "");
  try {
    cfg.kind = parse_kind(kind);
  } catch (const ValidationError& e) {
    bad("kind", e.what());
  }
  cfg.alpha = get_number(doc, "alpha", "alpha", cfg.alpha);
  cfg.T = get_number(doc, "T", "T", cfg.T);
  if (doc.contains("domain")) {
    const json& dom = doc.at("domain");
    if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number() || !dom[1].is_number())
      bad("domain", "expected [x_lo, x_hi]");
    cfg.x_lo = dom[0].get<double>();
    cfg.x_hi = dom[1].get<double>();
  }
  cfg.diffusivity = read_diffusivity(doc.at("diffusivity"));

  if (doc.contains("solution")) {
    const json& s = doc.at("solution");
    if (s.is_string()) {
      cfg.solution.name = s.get<std::string>();
    } else if (s.is_object()) {
      check_keys(s, "solution", {"source", "name", "lambda", "h_lambda", "c", "a", "b", "boundary_bump"});
      SolutionSpec& o = cfg.solution;
      o.source = get_string(s, "source", "solution.source", o.source);
      o.name = get_string(s, "name", "solution.name", o.name);
      o.lambda = get_number(s, "lambda", "solution.lambda", o.lambda);
      o.h_lambda = get_number(s, "h_lambda", "solution.h_lambda", o.h_lambda);
      o.c = get_number(s, "c", "solution.c", o.c);
      o.a = get_number(s, "a", "solution.a", o.a);
      o.b = get_number(s, "b", "solution.b", o.b);
      o.boundary_bump = get_number(s, "boundary_bump", "solution.boundary_bump", o.boundary_bump);
    } else {
      bad("solution", "expected a solution name or an object");
    }
  }
  if (doc.contains("grids")) {
    const json& g = doc.at("grids");
    if (!g.is_array()) bad("grids", "expected a list of integers");
    cfg.grids.clear();
    for (const json& n : g) cfg.grids.push_back(get_int(n, "grids"));
  }
  if (doc.contains("n_x")) cfg.n_x = get_int(doc.at("n_x"), "n_x");
  if (doc.contains("vectors")) {
    const json& v = doc.at("vectors");
    if (!v.is_array()) bad("vectors", "expected a list of vector ids");
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_string()) bad("vectors[" + std::to_string(k) + "]", "expected a string");
      cfg.vectors.push_back(v[k].get<std::string>());
    }
  }
  cfg.substitution = get_string(doc, "substitution", "substitution", "");
  cfg.out = get_string(doc, "out", "out", "");
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) bad("tolerances", "expected an object");
    check_keys(t, "tolerances", {"exclude_frac", "initial_layer", "threshold", "abs_tol"});
    Tolerances& o = cfg.tol;
    o.exclude_frac = get_number(t, "exclude_frac", "tolerances.exclude_frac", o.exclude_frac);
    o.initial_layer = get_number(t, "initial_layer", "tolerances.initial_layer", o.initial_layer);
    o.threshold = get_number(t, "threshold", "tolerances.threshold", o.threshold);
    o.abs_tol = get_number(t, "abs_tol", "tolerances.abs_tol", o.abs_tol);
  }
  cfg.allow_conditional = get_bool(doc, "allow_conditional", "allow_conditional", false);
  cfg.flux_rows = get_bool(doc, "flux_rows", "flux_rows", false);
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) bad("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
  const SolutionSpec& s = cfg.solution;
  json doc = {
      {"kind", to_string(cfg.kind)},
      {"alpha", cfg.alpha},
      {"T", cfg.T},
      {"domain", {cfg.x_lo, cfg.x_hi}},
      {"diffusivity", write_diffusivity(cfg.diffusivity)},
      {"solution",
       {{"source", s.source},
        {"name", s.name},
        {"lambda", s.lambda},
        {"h_lambda", s.h_lambda},
        {"c", s.c},
        {"a", s.a},
        {"b", s.b},
        {"boundary_bump", s.boundary_bump}}},
      {"grids", cfg.grids},
      {"n_x", cfg.n_x},
      {"vectors", cfg.vectors},
      {"substitution", cfg.substitution},
      {"out", cfg.out},
      {"tolerances",
       {{"exclude_frac", cfg.tol.exclude_frac},
        {"initial_layer", cfg.tol.initial_layer},
        {"threshold", cfg.tol.threshold},
        {"abs_tol", cfg.tol.abs_tol}}},
      {"allow_conditional", cfg.allow_conditional},
      {"flux_rows", cfg.flux_rows},
  };
  return doc.dump(2) + "\n";
}

// -- verification --------------------------------------------------------------

std::string VerifyResult::csv(const std::string& comment) const {
  std::ostringstream os;
  write_report_csv(os, rows, comment);
  return os.str();
}

GridFunction scenario_solution(const ScenarioConfig& cfg, int n_steps) {
  validate_config(cfg);
  return level_data(cfg, n_steps).u;
}

VerifyResult run_verify(const ScenarioConfig& cfg) {
  VerifyResult res;
  try {
    validate_config(cfg);
  } catch (const ValidationError& e) {
    res.status = ExitCode::Validation;
    res.message = e.what();
    return res;
  }
  if (cfg.vectors.empty()) return res;

  std::vector<ConservedVectorEval> evals;
  for (const auto& id : cfg.vectors) evals.push_back(vector_for(id, cfg));
  std::sort(evals.begin(), evals.end(),
            [](const ConservedVectorEval& a, const ConservedVectorEval& b) { return a.provenance < b.provenance; });
  std::optional<SubstitutionSel> sub;
  if (!cfg.substitution.empty()) sub = parse_substitution(cfg.substitution);
  const FractionalSpec spec = cfg.spec();

  const int levels = static_cast<int>(cfg.grids.size());
  std::vector<std::vector<ResidualReport>> per_level(levels);
  std::vector<std::pair<ExitCode, std::string>> failure(levels, {ExitCode::Ok, ""});

  // refinement levels are independent; rows are collected per level and merged in order
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < levels; ++k) {
    const int N = cfg.grids[k];
    const std::string ctx = "grid " + std::to_string(N) + ": ";
    try {
      const LevelData data = level_data(cfg, N);
      for (const auto& ev : evals) {
        VectorInputs in{data.u, spec, cfg.diffusivity};
        in.u1 = data.u1;
        in.h = data.h;
        if (ev.needs_substitution && sub)
          in.v = adjoint_substitution(sub->regime, spec, sub->c).field(data.u.time_grid(), data.u.space_grid());
        const ConservedVector cv = ev(in);
        VerifyWindow w;
        w.initial_layer = cfg.tol.initial_layer;
        w.end_exclusion = cfg.tol.exclude_frac;
        w.singular_at_T = ev.singular_at_T;
        per_level[k].push_back(divergence_residual(cv, w));
        if (cfg.flux_rows) per_level[k].push_back(flux_balance(cv, w));
        for (std::size_t r = per_level[k].size() - (cfg.flux_rows ? 2 : 1); r < per_level[k].size(); ++r) {
          per_level[k][r].kind = cfg.kind;
          per_level[k][r].alpha = cfg.alpha;
        }
      }
    } catch (const SolverError& e) {
      failure[k] = {ExitCode::Solver, ctx + "solver: " + e.what()};
    } catch (const ConvergenceError& e) {
      failure[k] = {ExitCode::Solver, ctx + "solver: " + e.what()};
    } catch (const std::exception& e) {
      failure[k] = {ExitCode::Validation, ctx + e.what()};
    }
  }
  for (int k = 0; k < levels; ++k)
    if (failure[k].first != ExitCode::Ok) {
      res.status = failure[k].first;
      res.message = failure[k].second;
      return res;
    }

  for (int k = 1; k < levels; ++k)
    for (std::size_t r = 0; r < per_level[k].size(); ++r) attach_ratio(per_level[k][r], per_level[k - 1][r]);
  for (int k = 0; k < levels; ++k) {
    std::stable_sort(per_level[k].begin(), per_level[k].end(),
                     [](const ResidualReport& a, const ResidualReport& b) { return a.provenance < b.provenance; });
    for (auto& row : per_level[k]) res.rows.push_back(std::move(row));
  }
  for (const auto& row : res.rows) {
    const bool nan = std::isnan(row.Linf);
    const bool slow = row.convergence_ratio && row.Linf > cfg.tol.abs_tol && *row.convergence_ratio < cfg.tol.threshold;
    if (nan || slow) {
      res.status = ExitCode::Conservation;
      res.message = row.provenance + " at n_steps " + std::to_string(row.n_steps) +
                    (nan ? ": residual is NaN" : ": convergence ratio " + fmt_num(*row.convergence_ratio) +
                                                      " below threshold " + fmt_num(cfg.tol.threshold));
      break;
    }
  }
  return res;
}

// -- catalog listing -----------------------------------------------------------

std::string run_catalog(const CatalogQuery& q) {
  const FractionalSpec spec = FractionalSpec::make(q.kind, q.alpha, 1.0);
  const Diffusivity& d = q.diffusivity;
  std::ostringstream os;
  os << "kind " << to_string(q.kind) << ", alpha " << fmt_num(q.alpha) << ", diffusivity " << d.describe() << "\n\n";

  const auto syms = list_symmetries(q.kind, q.alpha, d, {q.allow_conditional});
  os << "symmetries\n";
  for (const auto& s : syms) {
    os << "  " << std::left << std::setw(10) << s.name() << s.describe;
    if (s.conditional) os << "  (conditional: u_t(0,x) = 0)";
    os << '\n';
  }

  const AdjointRegime regime = default_regime(spec);
  os << "\nsubstitutions\n";
  os << "  " << std::setw(18) << to_string(regime) << substitution_formula(regime, q.kind) << '\n';
  if (d.linear())
    os << "  " << std::setw(18) << to_string(AdjointRegime::Linear_particular)
       << substitution_formula(AdjointRegime::Linear_particular, q.kind) << '\n';

  if (!d.linear()) {
    os << "\ncorrespondence (" << to_string(regime) << "; vector numbers, 0 = trivial)\n";
    std::vector<SymmetryId> cols;
    for (SymmetryId c : correspondence_columns(regime, q.allow_conditional))
      if (std::any_of(syms.begin(), syms.end(), [&](const Symmetry& s) { return s.id == c; })) cols.push_back(c);
    auto row = [&](std::string head, const std::vector<std::string>& cells) {
      std::ostringstream line;
      line << std::left << "  " << std::setw(10) << head;
      for (const auto& c : cells) line << std::setw(16) << c;
      std::string s = line.str();
      s.erase(s.find_last_not_of(' ') + 1);
      os << s << '\n';
    };
    std::vector<std::string> names;
    for (SymmetryId c : cols) names.push_back(to_string(c));
    row("constant", names);
    for (int k = 1; k <= (spec.subdiffusion() ? 2 : 4); ++k) {
      std::vector<std::string> cells;
      for (SymmetryId c : cols) cells.push_back(cell_text(correspondence(c, k, regime, q.allow_conditional)));
      row("c" + std::to_string(k), cells);
    }
  } else {
    os << "\nlinear equation: vectors follow from the substitution and W of each symmetry\n";
  }

  os << "\nconserved vectors\n";
  for (const auto& id : catalog_ids()) {
    if (!catalog_admissible(id, spec, d)) continue;
    const ConservedVectorEval ev = catalog_vector(id, spec, d);
    os << "  " << std::setw(22) << id << ev.description;
    if (uses_xinf(id)) os << "  (requires h)";
    os << '\n';
  }
  os << std::right;
  return os.str();
}

}  // namespace fcl
