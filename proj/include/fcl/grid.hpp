#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fcl {

/// Uniform time nodes t_i = i*h on [0, T].
struct TimeGrid {
  double T = 1.0;
  int n_steps = 2;

  static TimeGrid make(double T, int n_steps);

  double h() const { return T / n_steps; }
  int nodes() const { return n_steps + 1; }
  double t(int i) const { return i == n_steps ? T : i * h(); }

  bool operator==(const TimeGrid&) const = default;
};

/// Uniform space nodes on [x_lo, x_hi].
struct SpaceGrid {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_x = 2;

  static SpaceGrid make(double x_lo, double x_hi, int n_x);

  double dx() const { return (x_hi - x_lo) / n_x; }
  int nodes() const { return n_x + 1; }
  double x(int j) const { return j == n_x ? x_hi : x_lo + j * dx(); }

  bool operator==(const SpaceGrid&) const = default;
};

/// Which end of [0,T] a power term is singular/anchored at:
/// Left means coef * t^p, Right means coef * (T - t)^p.
enum class Anchor { Left, Right };

/// Analytically carried power term of a time series.
struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;
  Anchor anchor = Anchor::Left;

  /// Value at time t on [0,T]; NaN at the anchor when the exponent is negative.
  double eval(double t, double T) const;
};

/// Samples of f(t) on a TimeGrid, split into a finite sampled part and a list
/// of power terms carried in closed form. Fractional operators act on the
/// sampled part with product integration and on the power terms exactly,
/// which keeps weak endpoint singularities out of the quadrature.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(TimeGrid grid);
  TimeSeries(TimeGrid grid, std::vector<double> values, std::vector<PowerTerm> terms = {});

  static TimeSeries sample(TimeGrid grid, const std::function<double(double)>& f);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  std::vector<PowerTerm>& terms() { return terms_; }

  /// Full value at node i (sampled part plus power terms).
  double at(int i) const;
  std::vector<double> dense() const;

  /// Folds the terms matching `which` into the sampled part.
  TimeSeries folded(Anchor which) const;
  /// Folds every term into the sampled part.
  TimeSeries folded() const;

  /// Time reversal t -> T - t; swaps term anchors.
  TimeSeries mirrored() const;

 private:
  TimeGrid grid_{};
  std::vector<double> values_;
  std::vector<PowerTerm> terms_;
};

/// Power term of a space-time field: coef(x_j) * t^p or coef(x_j) * (T-t)^p.
struct FieldTerm {
  double exponent = 0.0;
  Anchor anchor = Anchor::Left;
  std::vector<double> coef;  // one per space node
};

/// Space-time field u(t_i, x_j) stored row-major by time, plus optional
/// power terms shared by all columns.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(TimeGrid tg, SpaceGrid xg);
  GridFunction(TimeGrid tg, SpaceGrid xg, std::vector<double> values, std::vector<FieldTerm> terms = {});

  static GridFunction sample(TimeGrid tg, SpaceGrid xg, const std::function<double(double, double)>& f);

  const TimeGrid& time_grid() const { return tg_; }
  const SpaceGrid& space_grid() const { return xg_; }
  int nt() const { return tg_.nodes(); }
  int nx() const { return xg_.nodes(); }

  /// Sampled (regular) part.
  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * nx() + j]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * nx() + j]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  const std::vector<FieldTerm>& terms() const { return terms_; }
  std::vector<FieldTerm>& terms() { return terms_; }
  bool has_terms() const { return !terms_.empty(); }

  /// Full value (sampled part plus terms); NaN at singular anchors.
  double at(int i, int j) const;
  /// Copy with every term folded into the sampled part.
  GridFunction densified() const;

  TimeSeries column(int j) const;
  /// Builds a field from per-column series sharing one term structure.
  static GridFunction from_columns(TimeGrid tg, SpaceGrid xg, const std::vector<TimeSeries>& columns);

  bool same_grid(const GridFunction& other) const { return tg_ == other.tg_ && xg_ == other.xg_; }

 private:
  TimeGrid tg_{};
  SpaceGrid xg_{};
  std::vector<double> values_;
  std::vector<FieldTerm> terms_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where);

// Term-preserving linear algebra on fields.
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);
/// Multiplies by g(x); terms keep their structure.
GridFunction scale_x(const GridFunction& a, const std::function<double(double)>& g);
/// Multiplies by t^p for integer p >= 0; Left terms shift their exponent.
GridFunction mul_tpow(const GridFunction& a, int p);
/// Adds a constant.
GridFunction add_const(const GridFunction& a, double c);

// Pointwise (dense) algebra; terms are folded first.
GridFunction hadamard(const GridFunction& a, const GridFunction& b);
GridFunction divide(const GridFunction& a, const GridFunction& b);
GridFunction map(const GridFunction& a, const std::function<double(double)>& f);
GridFunction map_txu(const GridFunction& a, const std::function<double(double, double, double)>& f);

// Nodal derivatives: second-order central in the interior; end values extrapolate
// the interior differences. Power terms are differentiated exactly in time and
// their coefficients are differenced in space.
GridFunction dt(const GridFunction& u);
GridFunction dtt(const GridFunction& u);
GridFunction dx(const GridFunction& u);
GridFunction dxx(const GridFunction& u);

std::vector<double> diff1(std::span<const double> f, double h);
std::vector<double> diff2(std::span<const double> f, double h);

/// True when `e` is within 1e-12 of an integer in [lo, hi].
bool is_integer_in(double e, int lo, int hi);

}  // namespace fcl
