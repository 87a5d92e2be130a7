#pragma once

#include <cmath>
#include <vector>

namespace fcl::quad {

/// Nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b, a, b > -1 (Golub-Welsch).
/// Rules are cached; the reference stays valid for the program lifetime.
const Rule& gauss_jacobi(int n, double a, double b);
inline const Rule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Integral over [lo, hi] of f(s) * (hi - s)^a * (s - lo)^b.
template <class F>
double integrate_cell(double lo, double hi, double a, double b, F&& f, int n = 16) {
  const Rule& r = gauss_jacobi(n, a, b);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t q = 0; q < r.x.size(); ++q) sum += r.w[q] * f(mid + half * r.x[q]);
  double scale = half;
  if (a != 0.0 || b != 0.0) scale = std::pow(half, 1.0 + a + b);
  return scale * sum;
}

}  // namespace fcl::quad
