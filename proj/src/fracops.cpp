#include "fcl/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "fcl/errors.hpp"
#include "fcl/quadrature.hpp"
#include "fcl/specialfn.hpp"

namespace fcl {

std::string to_string(DerivativeKind k) { return k == DerivativeKind::Caputo ? "caputo" : "rl"; }

DerivativeKind parse_kind(const std::string& s) {
  if (s == "caputo" || s == "Caputo" || s == "C") return DerivativeKind::Caputo;
  if (s == "rl" || s == "RL" || s == "riemann_liouville" || s == "RiemannLiouville") return DerivativeKind::RiemannLiouville;
  throw ValidationError("unknown derivative kind '" + s + "'");
}

FractionalSpec FractionalSpec::make(DerivativeKind kind, double alpha, double T) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("alpha must lie in (0,2)");
  if (alpha == 1.0) throw ValidationError("alpha = 1 is excluded; use 1 +/- 1e-3 for integer-order comparisons");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
  return FractionalSpec{kind, alpha, T};
}

}  // namespace fcl

namespace fcl::fracops {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using specialfn::gamma;
using specialfn::rgamma;

int order_n(double alpha) { return alpha < 1.0 ? 1 : 2; }

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
    throw DomainError(std::string(where) + ": alpha must lie in (0,2) without 1");
}

void check_grid(const TimeGrid& g, int n, const char* where) {
  if (g.n_steps < 2 * n)
    throw InsufficientGridError(std::string(where) + ": need n_steps >= " + std::to_string(2 * n));
}

bool nonneg_integer(double e) { return is_integer_in(e, 0, 1 << 20); }

// Splits a series into its regular part with the `fold` anchor's terms sampled
// in, and the terms of the other anchor kept analytic.
struct Split {
  std::vector<double> reg;
  std::vector<PowerTerm> kept;
};

Split split(const TimeSeries& f, Anchor keep) {
  const Anchor fold = keep == Anchor::Left ? Anchor::Right : Anchor::Left;
  TimeSeries s = f.folded(fold);
  return {std::vector<double>(s.values().begin(), s.values().end()), s.terms()};
}

template <class Key, class Value, class Make>
const Value& cached(std::map<Key, Value>& cache, std::mutex& m, const Key& key, Make&& make) {
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Value v = make();
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(key, std::move(v)).first->second;
}

// Generalized binomial coefficient via running product.
double binom_next(double prev, double p, int k) { return prev * (p - (k - 1)) / k; }

const detail::PiWeights& pi_weights_cached(double mu, int n) {
  static std::map<std::pair<double, int>, detail::PiWeights> cache;
  static std::mutex m;
  return cached(cache, m, std::make_pair(mu, n), [&] { return detail::pi_weights(mu, n); });
}

// Regular-part product integration: out_i = h^mu/Gamma(mu+2) * [...].
std::vector<double> pi_apply(std::span<const double> f, double mu, double h) {
  const int N = static_cast<int>(f.size()) - 1;
  const auto& w = pi_weights_cached(mu, N);
  const double scale = std::pow(h, mu) * rgamma(mu + 2.0);
  std::vector<double> out(f.size(), 0.0);
  for (int i = 1; i <= N; ++i) {
    double s = w.a0[i] * f[0] + f[i];
    for (int j = 1; j < i; ++j) s += w.c[i - j] * f[j];
    out[i] = scale * s;
  }
  return out;
}

// Closed-form power rule for the left integral of order mu (mu < 0 means a
// derivative of order -mu). Returns false when the image vanishes.
bool power_rule(PowerTerm& t, double mu) {
  if (!(t.exponent > -1.0)) throw DomainError("power term exponent must exceed -1 (got " + std::to_string(t.exponent) + ")");
  const double coef = t.coef * gamma(t.exponent + 1.0) * rgamma(t.exponent + mu + 1.0);
  t.exponent += mu;
  t.coef = coef;
  return coef != 0.0 && std::isfinite(coef);
}

TimeSeries integral_left_impl(const TimeSeries& f, double mu) {
  Split s = split(f, Anchor::Left);
  const double h = f.grid().h();
  std::vector<PowerTerm> terms;
  // The line through the first two samples is integrated in closed form, so the
  // t^mu and t^{mu+1} modes of the image stay analytic. Nodal values are
  // unchanged because the rule is exact on linear data.
  if (std::isfinite(s.reg[0]) && std::isfinite(s.reg[1])) {
    const double f0 = s.reg[0], slope = (s.reg[1] - s.reg[0]) / h;
    for (int i = 0; i < f.grid().nodes(); ++i) s.reg[i] -= f0 + slope * f.grid().t(i);
    s.reg[0] = s.reg[1] = 0.0;
    if (f0 != 0.0) terms.push_back({f0 * rgamma(mu + 1.0), mu, Anchor::Left});
    if (slope != 0.0) terms.push_back({slope * rgamma(mu + 2.0), mu + 1.0, Anchor::Left});
  }
  std::vector<double> reg = pi_apply(s.reg, mu, h);
  for (PowerTerm t : s.kept)
    if (power_rule(t, mu)) terms.push_back(t);
  return TimeSeries(f.grid(), std::move(reg), std::move(terms));
}

std::vector<double> nodal_derivative(std::span<const double> f, int n, double h) {
  return n == 1 ? diff1(f, h) : diff2(f, h);
}

std::vector<double> gl_apply(std::span<const double> f, double alpha, double h) {
  const int N = static_cast<int>(f.size()) - 1;
  std::vector<double> g(N + 1);
  g[0] = 1.0;
  for (int k = 1; k <= N; ++k) g[k] = g[k - 1] * (1.0 - (alpha + 1.0) / k);
  const double scale = std::pow(h, -alpha);
  std::vector<double> out(f.size());
  for (int i = 0; i <= N; ++i) {
    double s = 0.0;
    for (int k = 0; k <= i; ++k) s += g[k] * f[i - k];
    out[i] = scale * s;
  }
  return out;
}

TimeSeries rl_left_impl(const TimeSeries& f, double alpha, Scheme scheme) {
  const int n = order_n(alpha);
  Split s = split(f, Anchor::Left);
  const double h = f.grid().h();
  std::vector<PowerTerm> terms;
  std::vector<double> reg;
  if (scheme == Scheme::GrunwaldLetnikov) {
    reg = gl_apply(s.reg, alpha, h);
  } else {
    TimeSeries w = integral_left_impl(TimeSeries(f.grid(), s.reg), n - alpha);
    reg = nodal_derivative(w.values(), n, h);
    for (PowerTerm t : w.terms()) {
      for (int k = 0; k < n && t.coef != 0.0; ++k) {
        if (is_integer_in(t.exponent, 0, 0)) t.coef = 0.0;
        t.coef *= t.exponent;
        t.exponent -= 1.0;
      }
      if (t.coef != 0.0) terms.push_back(t);
    }
  }
  for (PowerTerm t : s.kept) {
    if (!(t.exponent > -1.0)) throw DomainError("power term exponent must exceed -1");
    if (is_integer_in(t.exponent - alpha, -n, -1)) continue;
    if (power_rule(t, -alpha)) terms.push_back(t);
  }
  return TimeSeries(f.grid(), std::move(reg), std::move(terms));
}

// L1 weights applied to nodal data v: h^{-b}/Gamma(2-b) sum b_k (v_{j+1}-v_j).
std::vector<double> l1_apply(std::span<const double> v, double beta, double h) {
  const int N = static_cast<int>(v.size()) - 1;
  std::vector<double> b(N);
  for (int k = 0; k < N; ++k) b[k] = std::pow(k + 1.0, 1.0 - beta) - std::pow(static_cast<double>(k), 1.0 - beta);
  const double scale = std::pow(h, -beta) * rgamma(2.0 - beta);
  std::vector<double> out(v.size(), 0.0);
  for (int i = 1; i <= N; ++i) {
    double s = 0.0;
    for (int j = 0; j < i; ++j) s += b[i - 1 - j] * (v[j + 1] - v[j]);
    out[i] = scale * s;
  }
  return out;
}

TimeSeries caputo_left_impl(const TimeSeries& f, double alpha) {
  const int n = order_n(alpha);
  Split s = split(f, Anchor::Left);
  const double h = f.grid().h();
  std::vector<double> reg = n == 1 ? l1_apply(s.reg, alpha, h) : l1_apply(diff1(s.reg, h), alpha - 1.0, h);
  std::vector<PowerTerm> terms;
  for (PowerTerm t : s.kept) {
    if (is_integer_in(t.exponent, 0, n - 1)) continue;
    if (!(t.exponent > n - 1)) throw DomainError("Caputo derivative undefined for power term t^" + std::to_string(t.exponent));
    if (power_rule(t, -alpha)) terms.push_back(t);
  }
  return TimeSeries(f.grid(), std::move(reg), std::move(terms));
}

// Exact time derivative of terms, nodal differences of the sampled part.
TimeSeries time_derivative(const TimeSeries& f) {
  std::vector<double> reg = diff1(f.values(), f.grid().h());
  std::vector<PowerTerm> terms;
  for (PowerTerm t : f.terms()) {
    if (t.exponent == 0.0) continue;
    const double sign = t.anchor == Anchor::Left ? 1.0 : -1.0;
    terms.push_back({sign * t.coef * t.exponent, t.exponent - 1.0, t.anchor});
  }
  return TimeSeries(f.grid(), std::move(reg), std::move(terms));
}

// q_ab(m) from iterated antiderivatives of (m+z)^{mu-1}.
std::array<double, 4> moments_analytic(double mu, int m) {
  auto A = [&](int k, double z) {
    double d = 1.0;
    for (int r = 0; r < k; ++r) d *= mu + r;
    const double base = m + z;
    return base <= 0.0 ? 0.0 : std::pow(base, mu - 1.0 + k) / d;
  };
  auto M = [&](int k, double c) { return A(k + 1, c) - A(k + 1, c - 1.0); };
  auto Nf = [&](int k, double c) { return -A(k + 1, c - 1.0) + A(k + 2, c) - A(k + 2, c - 1.0); };
  const double m00 = M(1, 1) - M(1, 0);
  const double m01 = M(1, 1) - M(2, 1) + M(2, 0);
  const double m10 = Nf(1, 1) - Nf(1, 0);
  const double m11 = Nf(1, 1) - Nf(2, 1) + Nf(2, 0);
  return {m00 - m10 - m01 + m11, m01 - m11, m10 - m11, m11};
}

const std::vector<std::array<double, 4>>& j_moments_cached(double mu, int N) {
  static std::map<std::pair<double, int>, std::vector<std::array<double, 4>>> cache;
  static std::mutex m;
  return cached(cache, m, std::make_pair(mu, N), [&] {
    std::vector<std::array<double, 4>> q(N + 1);
    for (int k = 1; k <= N; ++k) q[k] = detail::j_cell_moments(mu, k);
    return q;
  });
}

// Regular x regular part of J by the O(N^2) update over the index set
// {(j,k): j < i <= k} of cell pairs.
std::vector<double> j_regular(std::span<const double> f, std::span<const double> g, double mu, double h) {
  const int N = static_cast<int>(f.size()) - 1;
  const auto& q = j_moments_cached(mu, N);
  const double scale = std::pow(h, mu + 1.0) * rgamma(mu);
  auto P = [&](int j, int k) {
    const auto& w = q[k - j];
    return w[0] * f[j] * g[k] + w[1] * f[j] * g[k + 1] + w[2] * f[j + 1] * g[k] + w[3] * f[j + 1] * g[k + 1];
  };
  std::vector<double> J(N + 1, 0.0);
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    double add = 0.0, sub = 0.0;
    for (int k = i + 1; k < N; ++k) add += P(i, k);
    for (int j = 0; j < i; ++j) sub += P(j, i);
    acc += add - sub;
    J[i + 1] = scale * acc;
  }
  J[N] = 0.0;
  return J;
}

// int_0^{t_i} X(s) Y(s) ds where X and Y are series with terms.
std::vector<double> product_cumint(const TimeSeries& X, const TimeSeries& Y) {
  const TimeGrid& g = X.grid();
  const int N = g.n_steps;
  std::vector<double> out(N + 1, 0.0);
  auto add = [&](const std::vector<double>& v, double s) {
    for (int i = 0; i <= N; ++i) out[i] += s * v[i];
  };
  std::vector<double> ones(N + 1, 1.0);
  auto weights = [](const PowerTerm& t, double& A, double& B) {
    (t.anchor == Anchor::Left ? A : B) += t.exponent;
  };
  // regular x regular: trapezoid of nodal products
  {
    double acc = 0.0;
    const double h = g.h();
    for (int i = 1; i <= N; ++i) {
      acc += 0.5 * h * (X.values()[i - 1] * Y.values()[i - 1] + X.values()[i] * Y.values()[i]);
      out[i] += acc;
    }
  }
  for (const auto& t : Y.terms()) {
    double A = 0, B = 0;
    weights(t, A, B);
    add(cumulative_weighted(g, X.values(), A, B), t.coef);
  }
  for (const auto& t : X.terms()) {
    double A = 0, B = 0;
    weights(t, A, B);
    add(cumulative_weighted(g, Y.values(), A, B), t.coef);
  }
  for (const auto& tx : X.terms())
    for (const auto& ty : Y.terms()) {
      double A = 0, B = 0;
      weights(tx, A, B);
      weights(ty, A, B);
      add(cumulative_weighted(g, ones, A, B), tx.coef * ty.coef);
    }
  return out;
}

// int_0^t [a * tI^mu b - b * 0I^mu a] ds (the derivative property of J).
std::vector<double> j_by_property(const TimeSeries& a, const TimeSeries& b, double mu) {
  TimeSeries Ib = right_frac_integral(b, mu);
  TimeSeries Ia = left_frac_integral(a, mu);
  std::vector<double> p1 = product_cumint(a, Ib);
  std::vector<double> p2 = product_cumint(b, Ia);
  for (std::size_t i = 0; i < p1.size(); ++i) p1[i] -= p2[i];
  return p1;
}

}  // namespace

namespace detail {

PiWeights pi_weights(double mu, int n_steps) {
  const double p = mu + 1.0;
  PiWeights w;
  w.c.assign(n_steps + 1, 0.0);
  w.a0.assign(n_steps + 1, 0.0);
  for (int m = 1; m <= n_steps; ++m) {
    const double md = m;
    if (m < 4) {
      w.c[m] = std::pow(md + 1.0, p) - 2.0 * std::pow(md, p) + std::pow(md - 1.0, p);
    } else {
      // 2 m^p sum_k binom(p,2k) m^{-2k}; avoids cancellation for large m
      double sum = 0.0, b = 1.0, inv = 1.0;
      const double inv2 = 1.0 / (md * md);
      for (int k = 1; k <= 60; ++k) {
        b = binom_next(binom_next(b, p, 2 * k - 1), p, 2 * k);
        inv *= inv2;
        const double term = b * inv;
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum) || b == 0.0) break;
      }
      w.c[m] = 2.0 * std::pow(md, p) * sum;
    }
  }
  for (int i = 1; i <= n_steps; ++i) {
    const double id = i;
    if (i < 4) {
      w.a0[i] = std::pow(id - 1.0, p) - (id - 1.0 - mu) * std::pow(id, mu);
    } else {
      // i^mu sum_{k>=2} (-1)^k binom(p,k) i^{1-k}
      double sum = 0.0, b = 1.0, pw = id;
      for (int k = 1; k <= 120; ++k) {
        b = binom_next(b, p, k);
        pw /= id;
        if (k < 2) continue;
        const double term = ((k % 2) ? -b : b) * pw;
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum) || b == 0.0) break;
      }
      w.a0[i] = std::pow(id, mu) * sum;
    }
  }
  return w;
}

std::array<double, 4> j_cell_moments_quadrature(double mu, int m, int order) {
  const auto& r = quad::gauss_legendre(order);
  std::array<double, 4> q{0, 0, 0, 0};
  for (std::size_t a = 0; a < r.x.size(); ++a) {
    const double tau = 0.5 * (1.0 + r.x[a]);
    for (std::size_t b = 0; b < r.x.size(); ++b) {
      const double s = 0.5 * (1.0 + r.x[b]);
      const double w = 0.25 * r.w[a] * r.w[b] * std::pow(m + s - tau, mu - 1.0);
      q[0] += w * (1.0 - tau) * (1.0 - s);
      q[1] += w * (1.0 - tau) * s;
      q[2] += w * tau * (1.0 - s);
      q[3] += w * tau * s;
    }
  }
  return q;
}

std::array<double, 4> j_cell_moments(double mu, int m) {
  if (m <= 1) return moments_analytic(mu, m);
  return j_cell_moments_quadrature(mu, m, m <= 4 ? 20 : 12);
}

}  // namespace detail

std::vector<double> cumulative_weighted(const TimeGrid& grid, std::span<const double> p, double A, double B) {
  if (!(A > -1.0) || !(B > -1.0)) throw DomainError("cumulative_weighted: exponents must exceed -1");
  const int N = grid.n_steps;
  const double T = grid.T;
  const bool smooth_left = nonneg_integer(A), smooth_right = nonneg_integer(B);
  std::vector<double> out(N + 1, 0.0);
  double acc = 0.0;
  for (int j = 0; j < N; ++j) {
    const double lo = grid.t(j), hi = grid.t(j + 1);
    const bool sl = j == 0 && !smooth_left;
    const bool sr = j == N - 1 && !smooth_right;
    const double p0 = p[j], p1 = p[j + 1];
    auto F = [&](double s) {
      double v = p0 + (p1 - p0) * (s - lo) / (hi - lo);
      if (!sl && A != 0.0) v *= std::pow(s, A);
      if (!sr && B != 0.0) v *= std::pow(T - s, B);
      return v;
    };
    acc += quad::integrate_cell(lo, hi, sr ? B : 0.0, sl ? A : 0.0, F, 16);
    out[j + 1] = acc;
  }
  return out;
}

TimeSeries left_frac_integral(const TimeSeries& f, double mu) {
  if (!(mu > 0.0)) throw DomainError("left_frac_integral: mu must be positive");
  return integral_left_impl(f, mu);
}

TimeSeries right_frac_integral(const TimeSeries& f, double mu) {
  if (!(mu > 0.0)) throw DomainError("right_frac_integral: mu must be positive");
  return integral_left_impl(f.mirrored(), mu).mirrored();
}

TimeSeries rl_left_derivative(const TimeSeries& f, double alpha, Scheme scheme) {
  check_alpha(alpha, "rl_left_derivative");
  check_grid(f.grid(), order_n(alpha), "rl_left_derivative");
  return rl_left_impl(f, alpha, scheme);
}

TimeSeries caputo_left_derivative(const TimeSeries& f, double alpha) {
  check_alpha(alpha, "caputo_left_derivative");
  check_grid(f.grid(), order_n(alpha), "caputo_left_derivative");
  return caputo_left_impl(f, alpha);
}

TimeSeries rl_right_derivative(const TimeSeries& f, double alpha, Scheme scheme) {
  check_alpha(alpha, "rl_right_derivative");
  check_grid(f.grid(), order_n(alpha), "rl_right_derivative");
  return rl_left_impl(f.mirrored(), alpha, scheme).mirrored();
}

TimeSeries caputo_right_derivative(const TimeSeries& f, double alpha) {
  check_alpha(alpha, "caputo_right_derivative");
  check_grid(f.grid(), order_n(alpha), "caputo_right_derivative");
  return caputo_left_impl(f.mirrored(), alpha).mirrored();
}

TimeSeries left_rl_order(const TimeSeries& f, double order) {
  if (order < 0.0) return left_frac_integral(f, -order);
  if (order == 0.0) return f;
  if (order == 1.0) return time_derivative(f);
  return rl_left_derivative(f, order);
}

TimeSeries right_rl_order(const TimeSeries& f, double order) {
  return left_rl_order(f.mirrored(), order).mirrored();
}

TimeSeries j_integral(const TimeSeries& f, const TimeSeries& g, double alpha) {
  check_alpha(alpha, "j_integral");
  if (!(f.grid() == g.grid())) throw ShapeError("j_integral: f and g are on different grids");
  const double mu = order_n(alpha) - alpha;
  const TimeGrid& grid = f.grid();

  // f = fL + ft (left terms / rest), g = gt + gR (rest / right terms)
  Split fs = split(f, Anchor::Left);
  Split gs = split(g, Anchor::Right);
  for (const auto& t : g.terms())
    if (t.anchor == Anchor::Left && t.exponent < 0.0)
      throw DomainError("j_integral: g may not be singular at t = 0");
  TimeSeries ft(grid, fs.reg);
  TimeSeries gt(grid, gs.reg);

  std::vector<double> J = j_regular(fs.reg, gs.reg, mu, grid.h());
  if (!fs.kept.empty()) {
    TimeSeries fL(grid, std::vector<double>(grid.nodes(), 0.0), fs.kept);
    auto extra = j_by_property(fL, g, mu);
    for (std::size_t i = 0; i < J.size(); ++i) J[i] += extra[i];
  }
  if (!gs.kept.empty()) {
    TimeSeries gR(grid, std::vector<double>(grid.nodes(), 0.0), gs.kept);
    auto extra = j_by_property(ft, gR, mu);
    for (std::size_t i = 0; i < J.size(); ++i) J[i] += extra[i];
  }
  J[0] = 0.0;
  return TimeSeries(grid, std::move(J));
}

// ------------------------------------------------------ WeightedLeftIntegral

WeightedLeftIntegral::WeightedLeftIntegral(TimeGrid grid, double mu, Kernel omega, std::vector<double> left_exponents,
                                           bool singular_at_T)
    : grid_(grid), mu_(mu), singular_at_T_(singular_at_T), exponents_(std::move(left_exponents)) {
  if (!(mu > 0.0)) throw DomainError("WeightedLeftIntegral: mu must be positive");
  for (double e : exponents_)
    if (!(e > -1.0)) throw DomainError("WeightedLeftIntegral: term exponent must exceed -1");
  const int N = grid.n_steps;
  const double rg = rgamma(mu);
  w0_.assign(N + 1, {});
  w1_.assign(N + 1, {});
  termw_.assign(exponents_.size(), std::vector<double>(N + 1, 0.0));
  const int last = singular_at_T ? N - 1 : N;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 1; i <= last; ++i) {
    try {
      const double ti = grid.t(i);
      std::vector<double> a(i), b(i);
      for (int j = 0; j < i; ++j) {
        const double lo = grid.t(j), hi = grid.t(j + 1), h = hi - lo;
        const bool touch = j == i - 1;
        const double ka = touch ? mu - 1.0 : 0.0;
        const int order = (i - j >= 3) ? 10 : 16;
        auto base = [&](double s) {
          double v = omega(ti, s);
          if (!touch) v *= std::pow(ti - s, mu - 1.0);
          return v;
        };
        a[j] = rg * quad::integrate_cell(lo, hi, ka, 0.0, [&](double s) { return base(s) * (hi - s) / h; }, order);
        b[j] = rg * quad::integrate_cell(lo, hi, ka, 0.0, [&](double s) { return base(s) * (s - lo) / h; }, order);
      }
      std::vector<double> tw(exponents_.size(), 0.0);
      for (std::size_t k = 0; k < exponents_.size(); ++k) {
        const double e = exponents_[k];
        const bool sing = !nonneg_integer(e);
        double sum = 0.0;
        for (int j = 0; j < i; ++j) {
          const double lo = grid.t(j), hi = grid.t(j + 1);
          const bool touch = j == i - 1;
          const bool sl = j == 0 && sing;
          auto F = [&](double s) {
            double v = omega(ti, s);
            if (!touch) v *= std::pow(ti - s, mu - 1.0);
            if (!sl && e != 0.0) v *= std::pow(s, e);
            return v;
          };
          sum += quad::integrate_cell(lo, hi, touch ? mu - 1.0 : 0.0, sl ? e : 0.0, F, 16);
        }
        tw[k] = rg * sum;
      }
      w0_[i] = std::move(a);
      w1_[i] = std::move(b);
      for (std::size_t k = 0; k < exponents_.size(); ++k) termw_[k][i] = tw[k];
    } catch (...) {
#pragma omp critical(fcl_weighted_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

TimeSeries WeightedLeftIntegral::apply(const TimeSeries& f) const {
  if (!(f.grid() == grid_)) throw ShapeError("WeightedLeftIntegral: grid mismatch");
  Split s = split(f, Anchor::Left);
  std::vector<double> coef(exponents_.size(), 0.0);
  for (const auto& t : s.kept) {
    auto it = std::find_if(exponents_.begin(), exponents_.end(), [&](double e) { return std::fabs(e - t.exponent) <= 1e-12; });
    if (it == exponents_.end())
      throw DomainError("WeightedLeftIntegral: no weights prepared for exponent " + std::to_string(t.exponent));
    coef[it - exponents_.begin()] += t.coef;
  }
  const int N = grid_.n_steps;
  std::vector<double> out(N + 1, 0.0);
  for (int i = 1; i <= N; ++i) {
    if (singular_at_T_ && i == N) {
      out[i] = kNaN;
      continue;
    }
    double v = 0.0;
    for (int j = 0; j < i; ++j) v += w0_[i][j] * s.reg[j] + w1_[i][j] * s.reg[j + 1];
    for (std::size_t k = 0; k < coef.size(); ++k) v += coef[k] * termw_[k][i];
    out[i] = v;
  }
  return TimeSeries(grid_, std::move(out));
}

WeightedLeftIntegral make_f_modified_integral(TimeGrid grid, double alpha, std::vector<double> left_exponents) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("f_modified_integral: alpha must lie in (1,2)");
  const double T = grid.T;
  auto omega = [alpha, T](double t, double tau) {
    const double z = std::max(0.0, (t - tau) / (T - tau));
    return specialfn::hyp2f1(1.0, 1.0, 2.0 - alpha, z);
  };
  return WeightedLeftIntegral(grid, 2.0 - alpha, omega, std::move(left_exponents), true);
}

TimeSeries f_modified_integral(const TimeSeries& f, double alpha) {
  std::vector<double> ex;
  for (const auto& t : f.terms())
    if (t.anchor == Anchor::Left) ex.push_back(t.exponent);
  return make_f_modified_integral(f.grid(), alpha, std::move(ex)).apply(f);
}

}  // namespace fcl::fracops
