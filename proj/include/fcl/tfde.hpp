#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fcl/fracops.hpp"
#include "fcl/grid.hpp"

namespace fcl {

enum class DiffusivityFamily { Constant, Power, Exponential };

/// k(u) family with derivatives and primitive K (K' = k).
struct Diffusivity {
  DiffusivityFamily family = DiffusivityFamily::Constant;
  double k0 = 1.0;    // Constant
  double beta = 1.0;  // Power

  static Diffusivity constant(double k0 = 1.0);
  static Diffusivity power(double beta);
  static Diffusivity exponential();

  bool linear() const { return family == DiffusivityFamily::Constant; }
  double k(double u) const;
  double dk(double u) const;
  double d2k(double u) const;
  double K(double u) const;
  /// Inverse of K; throws RangeError outside its image.
  double K_inv(double y) const;

  std::string describe() const;
  bool operator==(const Diffusivity&) const = default;
};

/// Singular time mode s(x) t^exponent of an RL solution, carried analytically.
struct SingularMode {
  double exponent = 0.0;
  std::function<double(double)> profile;
};

/// Solves  D^alpha u = (k(u) u_x)_x  on (0,T] x [x_lo, x_hi] with Dirichlet data.
///
/// The solution is split as u = S + r. S is a sum of SingularMode terms (RL
/// kind only; it encodes the integrated initial conditions) and r is the
/// regular part stepped on the grid. `r0`/`r1` are r(0,x) and r_t(0,x);
/// `r_lo`/`r_hi` are the boundary traces of r. For Caputo problems S is empty
/// and r = u.
struct TFDEProblem {
  FractionalSpec spec;
  Diffusivity diffusivity;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::function<double(double)> r0;
  std::function<double(double)> r1;
  std::function<double(double)> r_lo;
  std::function<double(double)> r_hi;
  std::vector<SingularMode> singular;

  void validate() const;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

// -- exact solutions ---------------------------------------------------------

/// Caputo: E_a(-l^2 t^a) sin(l x); RL: t^{a-1} E_{a,a}(-l^2 t^a) sin(l x), k = 1.
/// Low-order non-integer time powers of the series are kept as field terms.
GridFunction exact_linear_separable(const FractionalSpec& spec, double lambda, const TimeGrid& tg, const SpaceGrid& xg);

/// RL mode u = c t^{alpha-1}, constant in x.
GridFunction exact_rl_power_mode(double alpha, double c, const TimeGrid& tg, const SpaceGrid& xg);

/// Time-independent u with K(u) = a x + b (Caputo).
GridFunction exact_stationary_caputo(const Diffusivity& d, double a, double b, const TimeGrid& tg, const SpaceGrid& xg);

/// RL separable u = t^{alpha-1} F(x) with K-type profile F^{beta+1}/(beta+1) = a x + b, k = u^beta.
GridFunction exact_rl_separable_power(double alpha, double beta, double a, double b, const TimeGrid& tg,
                                      const SpaceGrid& xg);
/// Profile F(x) of exact_rl_separable_power.
double rl_separable_profile(double beta, double a, double b, double x);

// -- solver and residual -----------------------------------------------------

GridFunction solve_nonlinear(const TFDEProblem& problem, const TimeGrid& tg, int n_x, const SolverOptions& opt = {});

/// k'(u) u_x^2 + k(u) u_xx with central differences (dense field).
GridFunction diffusion_term(const GridFunction& u, const Diffusivity& d);

/// D^alpha u - (k(u) u_x)_x.
GridFunction tfde_residual(const GridFunction& u, const FractionalSpec& spec, const Diffusivity& d);
GridFunction tfde_residual(const GridFunction& u, const TFDEProblem& problem);

// -- CSV layout: header row of x nodes, first column of t nodes ---------------

void write_grid_csv(std::ostream& os, const GridFunction& u);
void write_grid_csv(const std::string& path, const GridFunction& u);
GridFunction read_grid_csv(std::istream& is);

}  // namespace fcl
