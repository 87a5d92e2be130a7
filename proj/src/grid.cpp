#include "fcl/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fcl/errors.hpp"

namespace fcl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_exponent(double a, double b) { return std::fabs(a - b) <= 1e-12; }

void add_field_term(std::vector<FieldTerm>& terms, const FieldTerm& t, double scale) {
  for (auto& existing : terms) {
    if (existing.anchor == t.anchor && same_exponent(existing.exponent, t.exponent)) {
      for (std::size_t j = 0; j < existing.coef.size(); ++j) existing.coef[j] += scale * t.coef[j];
      return;
    }
  }
  FieldTerm copy = t;
  for (auto& c : copy.coef) c *= scale;
  terms.push_back(std::move(copy));
}

}  // namespace

bool is_integer_in(double e, int lo, int hi) {
  const double r = std::round(e);
  return std::fabs(e - r) <= 1e-12 && r >= lo && r <= hi;
}

TimeGrid TimeGrid::make(double T, int n_steps) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("TimeGrid: T must be positive and finite");
  if (n_steps < 2) throw DomainError("TimeGrid: n_steps must be >= 2");
  return TimeGrid{T, n_steps};
}

SpaceGrid SpaceGrid::make(double x_lo, double x_hi, int n_x) {
  if (!(x_lo < x_hi)) throw DomainError("SpaceGrid: x_lo must be < x_hi");
  if (n_x < 2) throw DomainError("SpaceGrid: n_x must be >= 2");
  return SpaceGrid{x_lo, x_hi, n_x};
}

double PowerTerm::eval(double t, double T) const {
  const double base = anchor == Anchor::Left ? t : T - t;
  if (base <= 0.0) {
    if (exponent < 0.0) return kNaN;
    return exponent == 0.0 ? coef : 0.0;
  }
  if (exponent == 0.0) return coef;
  return coef * std::pow(base, exponent);
}

// ---------------------------------------------------------------- TimeSeries

TimeSeries::TimeSeries(TimeGrid grid) : grid_(grid), values_(grid.nodes(), 0.0) {}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values, std::vector<PowerTerm> terms)
    : grid_(grid), values_(std::move(values)), terms_(std::move(terms)) {
  if (static_cast<int>(values_.size()) != grid_.nodes())
    throw ShapeError("TimeSeries: expected " + std::to_string(grid_.nodes()) + " values, got " +
                     std::to_string(values_.size()));
}

TimeSeries TimeSeries::sample(TimeGrid grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.nodes());
  for (int i = 0; i < grid.nodes(); ++i) {
    v[i] = f(grid.t(i));
    if (!std::isfinite(v[i])) throw DomainError("TimeSeries::sample: non-finite value at t=" + std::to_string(grid.t(i)));
  }
  return TimeSeries(grid, std::move(v));
}

double TimeSeries::at(int i) const {
  double v = values_[i];
  for (const auto& term : terms_) v += term.eval(grid_.t(i), grid_.T);
  return v;
}

std::vector<double> TimeSeries::dense() const {
  std::vector<double> out(values_.size());
  for (int i = 0; i < grid_.nodes(); ++i) out[i] = at(i);
  return out;
}

TimeSeries TimeSeries::folded(Anchor which) const {
  TimeSeries out(grid_, values_);
  for (const auto& term : terms_) {
    if (term.anchor != which) {
      out.terms_.push_back(term);
      continue;
    }
    for (int i = 0; i < grid_.nodes(); ++i) out.values_[i] += term.eval(grid_.t(i), grid_.T);
  }
  return out;
}

TimeSeries TimeSeries::folded() const { return folded(Anchor::Left).folded(Anchor::Right); }

TimeSeries TimeSeries::mirrored() const {
  TimeSeries out(grid_, std::vector<double>(values_.rbegin(), values_.rend()));
  for (auto term : terms_) {
    term.anchor = term.anchor == Anchor::Left ? Anchor::Right : Anchor::Left;
    out.terms_.push_back(term);
  }
  return out;
}

// -------------------------------------------------------------- GridFunction

GridFunction::GridFunction(TimeGrid tg, SpaceGrid xg)
    : tg_(tg), xg_(xg), values_(static_cast<std::size_t>(tg.nodes()) * xg.nodes(), 0.0) {}

GridFunction::GridFunction(TimeGrid tg, SpaceGrid xg, std::vector<double> values, std::vector<FieldTerm> terms)
    : tg_(tg), xg_(xg), values_(std::move(values)), terms_(std::move(terms)) {
  if (values_.size() != static_cast<std::size_t>(tg_.nodes()) * xg_.nodes())
    throw ShapeError("GridFunction: value count does not match grid shape");
  for (const auto& t : terms_)
    if (static_cast<int>(t.coef.size()) != xg_.nodes()) throw ShapeError("GridFunction: term coefficient count mismatch");
}

GridFunction GridFunction::sample(TimeGrid tg, SpaceGrid xg, const std::function<double(double, double)>& f) {
  GridFunction u(tg, xg);
  for (int i = 0; i < u.nt(); ++i)
    for (int j = 0; j < u.nx(); ++j) u(i, j) = f(tg.t(i), xg.x(j));
  return u;
}

double GridFunction::at(int i, int j) const {
  double v = (*this)(i, j);
  const double t = tg_.t(i);
  for (const auto& term : terms_) v += PowerTerm{term.coef[j], term.exponent, term.anchor}.eval(t, tg_.T);
  return v;
}

GridFunction GridFunction::densified() const {
  if (terms_.empty()) return *this;
  GridFunction out(tg_, xg_);
  for (int i = 0; i < nt(); ++i)
    for (int j = 0; j < nx(); ++j) out(i, j) = at(i, j);
  return out;
}

TimeSeries GridFunction::column(int j) const {
  std::vector<double> v(nt());
  for (int i = 0; i < nt(); ++i) v[i] = (*this)(i, j);
  std::vector<PowerTerm> pt;
  pt.reserve(terms_.size());
  for (const auto& term : terms_) pt.push_back({term.coef[j], term.exponent, term.anchor});
  return TimeSeries(tg_, std::move(v), std::move(pt));
}

GridFunction GridFunction::from_columns(TimeGrid tg, SpaceGrid xg, const std::vector<TimeSeries>& columns) {
  if (static_cast<int>(columns.size()) != xg.nodes()) throw ShapeError("from_columns: column count mismatch");
  GridFunction out(tg, xg);
  for (int j = 0; j < xg.nodes(); ++j) {
    const auto& col = columns[j];
    if (!(col.grid() == tg)) throw ShapeError("from_columns: time grid mismatch");
    const auto v = col.values();
    for (int i = 0; i < tg.nodes(); ++i) out(i, j) = v[i];
    // Columns may omit terms whose coefficient vanished there.
    for (const auto& t : col.terms()) {
      FieldTerm ft{t.exponent, t.anchor, std::vector<double>(xg.nodes(), 0.0)};
      ft.coef[j] = t.coef;
      add_field_term(out.terms_, ft, 1.0);
    }
  }
  return out;
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where) {
  if (!a.same_grid(b)) throw ShapeError(std::string(where) + ": grid mismatch");
}

// -------------------------------------------------------------- algebra

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "operator+");
  GridFunction out = a;
  auto ov = out.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] += bv[k];
  for (const auto& t : b.terms()) add_field_term(out.terms(), t, 1.0);
  return out;
}

GridFunction operator*(double s, const GridFunction& a) {
  GridFunction out = a;
  for (auto& v : out.values()) v *= s;
  for (auto& t : out.terms())
    for (auto& c : t.coef) c *= s;
  return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) { return a + (-1.0) * b; }

GridFunction scale_x(const GridFunction& a, const std::function<double(double)>& g) {
  GridFunction out = a;
  const auto& xg = a.space_grid();
  std::vector<double> gx(a.nx());
  for (int j = 0; j < a.nx(); ++j) gx[j] = g(xg.x(j));
  for (int i = 0; i < a.nt(); ++i)
    for (int j = 0; j < a.nx(); ++j) out(i, j) *= gx[j];
  for (auto& t : out.terms())
    for (int j = 0; j < a.nx(); ++j) t.coef[j] *= gx[j];
  return out;
}

GridFunction mul_tpow(const GridFunction& a, int p) {
  if (p < 0) throw DomainError("mul_tpow: p must be non-negative");
  if (p == 0) return a;
  const auto& tg = a.time_grid();
  GridFunction out(tg, a.space_grid());
  for (int i = 0; i < a.nt(); ++i) {
    const double w = std::pow(tg.t(i), p);
    for (int j = 0; j < a.nx(); ++j) out(i, j) = a(i, j) * w;
  }
  for (const auto& t : a.terms()) {
    if (t.anchor == Anchor::Left) {
      FieldTerm shifted = t;
      shifted.exponent += p;
      add_field_term(out.terms(), shifted, 1.0);
      continue;
    }
    for (int i = 0; i < a.nt(); ++i) {
      const double w = std::pow(tg.t(i), p);
      for (int j = 0; j < a.nx(); ++j) out(i, j) += w * PowerTerm{t.coef[j], t.exponent, t.anchor}.eval(tg.t(i), tg.T);
    }
  }
  return out;
}

GridFunction add_const(const GridFunction& a, double c) {
  GridFunction out = a;
  for (auto& v : out.values()) v += c;
  return out;
}

GridFunction hadamard(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "hadamard");
  GridFunction out(a.time_grid(), a.space_grid());
  for (int i = 0; i < a.nt(); ++i)
    for (int j = 0; j < a.nx(); ++j) out(i, j) = a.at(i, j) * b.at(i, j);
  return out;
}

GridFunction divide(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "divide");
  GridFunction out(a.time_grid(), a.space_grid());
  for (int i = 0; i < a.nt(); ++i)
    for (int j = 0; j < a.nx(); ++j) out(i, j) = a.at(i, j) / b.at(i, j);
  return out;
}

GridFunction map(const GridFunction& a, const std::function<double(double)>& f) {
  GridFunction out(a.time_grid(), a.space_grid());
  for (int i = 0; i < a.nt(); ++i)
    for (int j = 0; j < a.nx(); ++j) out(i, j) = f(a.at(i, j));
  return out;
}

GridFunction map_txu(const GridFunction& a, const std::function<double(double, double, double)>& f) {
  GridFunction out(a.time_grid(), a.space_grid());
  const auto& tg = a.time_grid();
  const auto& xg = a.space_grid();
  for (int i = 0; i < a.nt(); ++i)
    for (int j = 0; j < a.nx(); ++j) out(i, j) = f(tg.t(i), xg.x(j), a.at(i, j));
  return out;
}

// -------------------------------------------------------------- derivatives

namespace {

// End values by cubic extrapolation of the interior central differences. The
// error then stays a smooth function of the node up to the boundary, so nested
// differences (u_x, then (..)_x) remain consistent next to the ends.
void extrapolate_ends(std::vector<double>& d) {
  const std::size_t n = d.size();
  d[0] = 4.0 * d[1] - 6.0 * d[2] + 4.0 * d[3] - d[4];
  d[n - 1] = 4.0 * d[n - 2] - 6.0 * d[n - 3] + 4.0 * d[n - 4] - d[n - 5];
}

}  // namespace

std::vector<double> diff1(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw DomainError("diff1: need at least 3 nodes");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  if (n >= 6) {
    extrapolate_ends(d);
  } else {
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  }
  return d;
}

std::vector<double> diff2(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 4) throw DomainError("diff2: need at least 4 nodes");
  std::vector<double> d(n);
  const double h2 = h * h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
  if (n >= 6) {
    extrapolate_ends(d);
  } else {
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  }
  return d;
}

namespace {

GridFunction time_derivative(const GridFunction& u, int order) {
  const auto& tg = u.time_grid();
  GridFunction out(tg, u.space_grid());
  std::vector<double> col(u.nt());
  for (int j = 0; j < u.nx(); ++j) {
    for (int i = 0; i < u.nt(); ++i) col[i] = u(i, j);
    const auto d = order == 1 ? diff1(col, tg.h()) : diff2(col, tg.h());
    for (int i = 0; i < u.nt(); ++i) out(i, j) = d[i];
  }
  for (const auto& t : u.terms()) {
    FieldTerm cur = t;
    bool vanished = false;
    for (int k = 0; k < order; ++k) {
      if (is_integer_in(cur.exponent, 0, 0)) {
        vanished = true;
        break;
      }
      const double s = cur.anchor == Anchor::Left ? cur.exponent : -cur.exponent;
      for (auto& c : cur.coef) c *= s;
      cur.exponent -= 1.0;
      if (is_integer_in(cur.exponent, 0, 0)) cur.exponent = 0.0;
    }
    if (!vanished) add_field_term(out.terms(), cur, 1.0);
  }
  return out;
}

GridFunction space_derivative(const GridFunction& u, int order) {
  const auto& xg = u.space_grid();
  GridFunction out(u.time_grid(), xg);
  std::vector<double> row(u.nx());
  for (int i = 0; i < u.nt(); ++i) {
    for (int j = 0; j < u.nx(); ++j) row[j] = u(i, j);
    const auto d = order == 1 ? diff1(row, xg.dx()) : diff2(row, xg.dx());
    for (int j = 0; j < u.nx(); ++j) out(i, j) = d[j];
  }
  for (const auto& t : u.terms()) {
    FieldTerm d = t;
    d.coef = order == 1 ? diff1(t.coef, xg.dx()) : diff2(t.coef, xg.dx());
    out.terms().push_back(std::move(d));
  }
  return out;
}

}  // namespace

GridFunction dt(const GridFunction& u) { return time_derivative(u, 1); }
GridFunction dtt(const GridFunction& u) { return time_derivative(u, 2); }
GridFunction dx(const GridFunction& u) { return space_derivative(u, 1); }
GridFunction dxx(const GridFunction& u) { return space_derivative(u, 2); }

}  // namespace fcl
