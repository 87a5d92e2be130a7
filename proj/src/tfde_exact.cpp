#include <cmath>

#include "fcl/errors.hpp"
#include "fcl/specialfn.hpp"
#include "fcl/tfde.hpp"

namespace fcl {

namespace {

bool is_int(double v) { return std::fabs(v - std::round(v)) <= 1e-12; }

}  // namespace

GridFunction exact_linear_separable(const FractionalSpec& spec, double lambda, const TimeGrid& tg, const SpaceGrid& xg) {
  if (!(lambda > 0.0)) throw DomainError("exact_linear_separable: lambda must be positive");
  const double a = spec.alpha;
  const bool rl = spec.kind == DerivativeKind::RiemannLiouville;
  const double shift = rl ? a - 1.0 : 0.0;   // exponent of the k = 0 term
  const double gshift = rl ? a : 1.0;        // Gamma argument offset
  const double z = -lambda * lambda;
  const double attach_below = spec.n() + 1.0;

  // Series sum_k z^k t^{a k + shift} / Gamma(a k + gshift).
  struct Mode {
    long double coef;
    double exponent;
    bool attached;
  };
  std::vector<Mode> modes;
  const double zmax = std::fabs(z) * std::pow(tg.T, a);
  for (int k = 0; k < 400; ++k) {
    const double e = a * k + shift;
    // long double keeps the cancellation of large alternating terms in check
    const long double c = std::pow(static_cast<long double>(z), k) / std::tgamma(static_cast<long double>(a) * k + gshift);
    modes.push_back({c, e, !is_int(e) && e < attach_below});
    if (k > 2.0 * zmax + 10 && std::fabs(c) * std::pow(std::max(tg.T, 1.0), e) < 1e-19) break;
  }

  GridFunction u(tg, xg);
  std::vector<double> sx(xg.nodes());
  for (int j = 0; j < xg.nodes(); ++j) sx[j] = std::sin(lambda * xg.x(j));
  for (int i = 0; i < tg.nodes(); ++i) {
    const double t = tg.t(i);
    long double rem = 0.0L;
    for (const auto& m : modes) {
      if (m.attached) continue;
      rem += m.coef * (m.exponent == 0.0 ? 1.0L : std::pow(static_cast<long double>(t), m.exponent));
    }
    for (int j = 0; j < xg.nodes(); ++j) u(i, j) = static_cast<double>(rem) * sx[j];
  }
  for (const auto& m : modes) {
    if (!m.attached) continue;
    FieldTerm ft{m.exponent, Anchor::Left, sx};
    for (auto& c : ft.coef) c *= static_cast<double>(m.coef);
    u.terms().push_back(std::move(ft));
  }
  return u;
}

GridFunction exact_rl_power_mode(double alpha, double c, const TimeGrid& tg, const SpaceGrid& xg) {
  GridFunction u(tg, xg);
  u.terms().push_back({alpha - 1.0, Anchor::Left, std::vector<double>(xg.nodes(), c)});
  return u;
}

GridFunction exact_stationary_caputo(const Diffusivity& d, double a, double b, const TimeGrid& tg, const SpaceGrid& xg) {
  std::vector<double> prof(xg.nodes());
  for (int j = 0; j < xg.nodes(); ++j) prof[j] = d.K_inv(a * xg.x(j) + b);
  GridFunction u(tg, xg);
  for (int i = 0; i < tg.nodes(); ++i)
    for (int j = 0; j < xg.nodes(); ++j) u(i, j) = prof[j];
  return u;
}

double rl_separable_profile(double beta, double a, double b, double x) {
  return Diffusivity::power(beta).K_inv(a * x + b);
}

GridFunction exact_rl_separable_power(double alpha, double beta, double a, double b, const TimeGrid& tg,
                                      const SpaceGrid& xg) {
  std::vector<double> prof(xg.nodes());
  for (int j = 0; j < xg.nodes(); ++j) prof[j] = rl_separable_profile(beta, a, b, xg.x(j));
  GridFunction u(tg, xg);
  u.terms().push_back({alpha - 1.0, Anchor::Left, std::move(prof)});
  return u;
}

}  // namespace fcl
