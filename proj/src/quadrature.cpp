#include "fcl/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fcl/errors.hpp"
#include "fcl/specialfn.hpp"

namespace fcl::quad {
namespace {

Rule build_jacobi(int n, double a, double b) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 1));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(beta);
  }
  const double mu0 = std::pow(2.0, ab + 1.0) * specialfn::gamma(a + 1.0) * specialfn::gamma(b + 1.0) /
                     specialfn::gamma(ab + 2.0);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  if (n == 1) {
    r.x[0] = diag(0);
    r.w[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off.head(n - 1), Eigen::ComputeEigenvectors);
  for (int k = 0; k < n; ++k) {
    r.x[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    r.w[k] = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace

const Rule& gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_jacobi: n must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, a, b);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Rule>(build_jacobi(n, a, b))).first;
  return *it->second;
}

}  // namespace fcl::quad
