#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fcl/grid.hpp"

namespace fcl {

enum class DerivativeKind { RiemannLiouville, Caputo };

std::string to_string(DerivativeKind k);
DerivativeKind parse_kind(const std::string& s);

/// Time-fractional derivative type and order, alpha in (0,2) \ {1}.
struct FractionalSpec {
  DerivativeKind kind = DerivativeKind::Caputo;
  double alpha = 0.5;
  double T = 1.0;

  static FractionalSpec make(DerivativeKind kind, double alpha, double T);

  /// n = floor(alpha) + 1
  int n() const { return alpha < 1.0 ? 1 : 2; }
  bool subdiffusion() const { return alpha < 1.0; }
};

}  // namespace fcl

namespace fcl::fracops {

enum class Scheme { ProductIntegration, GrunwaldLetnikov };

// Time-series operators. Sampled data are treated as piecewise linear; power
// terms in the input are mapped in closed form where the operator allows it.

/// Left Riemann-Liouville integral 0I^mu_t, mu > 0.
TimeSeries left_frac_integral(const TimeSeries& f, double mu);
/// Right integral tI^mu_T, mu > 0.
TimeSeries right_frac_integral(const TimeSeries& f, double mu);

/// 0D^alpha_t f = D^n 0I^{n-alpha} f. Node 0 is boundary-unreliable.
TimeSeries rl_left_derivative(const TimeSeries& f, double alpha, Scheme scheme = Scheme::ProductIntegration);
/// C 0D^alpha_t f = 0I^{n-alpha} D^n f (L1 scheme; n = 2 applies L1 to the nodal velocity).
TimeSeries caputo_left_derivative(const TimeSeries& f, double alpha);
/// tD^alpha_T f = (-1)^n D^n tI^{n-alpha} f.
TimeSeries rl_right_derivative(const TimeSeries& f, double alpha, Scheme scheme = Scheme::ProductIntegration);
/// C tD^alpha_T f = (-1)^n tI^{n-alpha} D^n f.
TimeSeries caputo_right_derivative(const TimeSeries& f, double alpha);

/// Left RL operator of any real order: integral for order < 0, identity at 0.
TimeSeries left_rl_order(const TimeSeries& f, double order);
/// Right RL operator of any real order.
TimeSeries right_rl_order(const TimeSeries& f, double order);

/// J(f,g)(t) = 1/Gamma(n-alpha) int_0^t int_t^T f(tau) g(mu) (mu-tau)^{n-alpha-1} dmu dtau.
TimeSeries j_integral(const TimeSeries& f, const TimeSeries& g, double alpha);

/// Product-integration left integral with a smooth multiplicative kernel:
/// 1/Gamma(mu) int_0^t (t-tau)^{mu-1} omega(t,tau) f(tau) dtau.
/// The kernel weights depend only on the grid, so one instance is reused
/// across all columns of a field.
class WeightedLeftIntegral {
 public:
  using Kernel = std::function<double(double t, double tau)>;

  /// `left_exponents` lists the Left power-term exponents the instance
  /// must integrate exactly. With `singular_at_T` the node t = T is set to NaN.
  WeightedLeftIntegral(TimeGrid grid, double mu, Kernel omega, std::vector<double> left_exponents = {},
                       bool singular_at_T = false);

  TimeSeries apply(const TimeSeries& f) const;
  const TimeGrid& grid() const { return grid_; }

 private:
  TimeGrid grid_;
  double mu_;
  bool singular_at_T_;
  std::vector<double> exponents_;
  // w0_[i][j], w1_[i][j]: weights of f_j and f_{j+1} from cell j at node i.
  std::vector<std::vector<double>> w0_, w1_;
  // termw_[k][i]: integral of the kernel times tau^{exponents_[k]} at node i.
  std::vector<std::vector<double>> termw_;
};

/// Modified integral F 0I^{2-alpha}_t with kernel 2F1(1,1;2-alpha;(t-tau)/(T-tau)), alpha in (1,2).
TimeSeries f_modified_integral(const TimeSeries& f, double alpha);
WeightedLeftIntegral make_f_modified_integral(TimeGrid grid, double alpha, std::vector<double> left_exponents = {});

/// Cumulative integral int_0^{t_i} p(s) s^A (T-s)^B ds for piecewise-linear p.
std::vector<double> cumulative_weighted(const TimeGrid& grid, std::span<const double> p, double A, double B);

namespace detail {
/// Product-integration weights of the left integral (exposed for tests).
struct PiWeights {
  std::vector<double> c;   // c[m], m >= 1: interior weights
  std::vector<double> a0;  // a0[i], i >= 1: weight of f_0 at node i
};
PiWeights pi_weights(double mu, int n_steps);
/// Unit-cell moments q_ab(m) of the J product rule.
std::array<double, 4> j_cell_moments(double mu, int m);
std::array<double, 4> j_cell_moments_quadrature(double mu, int m, int order);
}  // namespace detail

}  // namespace fcl::fracops
