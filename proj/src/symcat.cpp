#include "fcl/symcat.hpp"

#include <cmath>
#include <sstream>

#include "fcl/errors.hpp"
#include "fcl/fracops_field.hpp"

namespace fcl {

namespace {

constexpr double kBetaTol = 1e-12;

using Piece = CharacteristicPiece;
using Src = CharacteristicPiece::Source;

std::function<double(double)> cst(double c) {
  return [c](double) { return c; };
}
std::function<double(double)> lin(double c) {
  return [c](double x) { return c * x; };
}
std::function<double(double)> quad(double c) {
  return [c](double x) { return c * x * x; };
}

Symmetry make(SymmetryId id, double alpha, double beta) {
  Symmetry s;
  s.id = id;
  auto zero = [](double, double, double) { return 0.0; };
  s.xi0 = s.xi1 = s.eta = zero;
  switch (id) {
    case SymmetryId::X1:  // -d/dx
      s.xi1 = [](double, double, double) { return -1.0; };
      s.xi1_zero = false;
      s.form = {{Src::Ux, 0, cst(1.0)}};
      s.describe = "-d/dx";
      break;
    case SymmetryId::X2:  // -(2t d/dt + alpha x d/dx)
      s.xi0 = [](double t, double, double) { return -2.0 * t; };
      s.xi1 = [alpha](double, double x, double) { return -alpha * x; };
      s.xi0_zero = s.xi1_zero = false;
      s.form = {{Src::Ut, 1, cst(2.0)}, {Src::Ux, 0, lin(alpha)}};
      s.describe = "-(2t d/dt + alpha x d/dx)";
      break;
    case SymmetryId::X3_lin:
      s.eta = [](double, double, double u) { return u; };
      s.form = {{Src::U, 0, cst(1.0)}};
      s.describe = "u d/du";
      break;
    case SymmetryId::Xinf:
      s.form = {{Src::H, 0, cst(1.0)}};
      s.describe = "h d/du (h solves the linear equation)";
      break;
    case SymmetryId::X3_pow:
      s.xi1 = [beta](double, double x, double) { return beta * x; };
      s.eta = [](double, double, double u) { return 2.0 * u; };
      s.xi1_zero = false;
      s.form = {{Src::U, 0, cst(2.0)}, {Src::Ux, 0, lin(-beta)}};
      s.describe = "beta x d/dx + 2u d/du";
      break;
    case SymmetryId::X3_exp:
      s.xi1 = [](double, double x, double) { return x; };
      s.eta = [](double, double, double) { return 2.0; };
      s.xi1_zero = false;
      s.form = {{Src::One, 0, cst(2.0)}, {Src::Ux, 0, lin(-1.0)}};
      s.describe = "x d/dx + 2 d/du";
      break;
    case SymmetryId::X4_pow43:
      s.xi1 = [](double, double x, double) { return x * x; };
      s.eta = [](double, double x, double u) { return -3.0 * x * u; };
      s.xi1_zero = false;
      s.form = {{Src::U, 0, lin(-3.0)}, {Src::Ux, 0, quad(-1.0)}};
      s.describe = "x^2 d/dx - 3xu d/du";
      break;
    case SymmetryId::X4_rl:
      s.xi0 = [](double t, double, double) { return t * t; };
      s.eta = [alpha](double t, double, double u) { return (alpha - 1.0) * t * u; };
      s.xi0_zero = false;
      s.form = {{Src::U, 1, cst(alpha - 1.0)}, {Src::Ut, 2, cst(-1.0)}};
      s.describe = "t^2 d/dt + (alpha-1) t u d/du";
      break;
  }
  return s;
}

}  // namespace

std::string to_string(SymmetryId id) {
  switch (id) {
    case SymmetryId::X1: return "X1";
    case SymmetryId::X2: return "X2";
    case SymmetryId::X3_lin: return "X3_lin";
    case SymmetryId::Xinf: return "Xinf";
    case SymmetryId::X3_pow: return "X3_pow";
    case SymmetryId::X3_exp: return "X3_exp";
    case SymmetryId::X4_pow43: return "X4_pow43";
    case SymmetryId::X4_rl: return "X4_rl";
  }
  return "?";
}

SymmetryId parse_symmetry_id(const std::string& s) {
  for (auto id : {SymmetryId::X1, SymmetryId::X2, SymmetryId::X3_lin, SymmetryId::Xinf, SymmetryId::X3_pow,
                  SymmetryId::X3_exp, SymmetryId::X4_pow43, SymmetryId::X4_rl})
    if (to_string(id) == s) return id;
  throw ValidationError("unknown symmetry id '" + s + "'");
}

std::vector<Symmetry> list_symmetries(DerivativeKind kind, double alpha, const Diffusivity& d,
                                      const SymmetryOptions& opt) {
  const double beta = d.beta;
  std::vector<Symmetry> out{make(SymmetryId::X1, alpha, beta), make(SymmetryId::X2, alpha, beta)};
  if (d.family == DiffusivityFamily::Constant) {
    out.push_back(make(SymmetryId::X3_lin, alpha, beta));
    out.push_back(make(SymmetryId::Xinf, alpha, beta));
    return out;
  }
  if (d.family == DiffusivityFamily::Exponential) {
    if (kind == DerivativeKind::Caputo) out.push_back(make(SymmetryId::X3_exp, alpha, beta));
    return out;
  }
  out.push_back(make(SymmetryId::X3_pow, alpha, beta));
  if (std::fabs(beta + 4.0 / 3.0) <= kBetaTol) out.push_back(make(SymmetryId::X4_pow43, alpha, beta));
  const double beta_rl = -2.0 * alpha / (alpha - 1.0);
  if (std::fabs(beta - beta_rl) <= kBetaTol * std::max(1.0, std::fabs(beta_rl))) {
    if (kind == DerivativeKind::RiemannLiouville) {
      out.push_back(make(SymmetryId::X4_rl, alpha, beta));
    } else if (opt.allow_conditional) {
      Symmetry s = make(SymmetryId::X4_rl, alpha, beta);
      s.conditional = true;
      s.describe += " [conditional: u_t(0,x) = 0]";
      out.push_back(std::move(s));
    }
  }
  return out;
}

Symmetry find_symmetry(SymmetryId id, DerivativeKind kind, double alpha, const Diffusivity& d,
                       const SymmetryOptions& opt) {
  for (auto& s : list_symmetries(kind, alpha, d, opt))
    if (s.id == id) return s;
  throw ValidationError("symmetry " + to_string(id) + " is not admitted for " + to_string(kind) + ", alpha = " +
                        std::to_string(alpha) + ", k = " + d.describe());
}

Symmetry with_h(Symmetry s, GridFunction h) {
  if (s.id != SymmetryId::Xinf) throw ValidationError("h: only Xinf takes a solution field");
  s.h = std::move(h);
  return s;
}

GridFunction characteristic(const Symmetry& s, const GridFunction& u) {
  GridFunction W(u.time_grid(), u.space_grid());
  for (const auto& p : s.form) {
    GridFunction src;
    switch (p.source) {
      case Src::U: src = u; break;
      case Src::Ut: src = dt(u); break;
      case Src::Ux: src = dx(u); break;
      case Src::One: src = add_const(GridFunction(u.time_grid(), u.space_grid()), 1.0); break;
      case Src::H:
        if (!s.h) throw ValidationError("Xinf: characteristic needs a solution h of the linear equation");
        require_same_grid(*s.h, u, "characteristic");
        src = *s.h;
        break;
    }
    W = W + mul_tpow(scale_x(src, p.xf), p.tpow);
  }
  return W;
}

GridFunction characteristic_pointwise(const Symmetry& s, const GridFunction& u) {
  if (s.id == SymmetryId::Xinf) return characteristic(s, u).densified();
  const GridFunction ut = dt(u), ux = dx(u);
  GridFunction W(u.time_grid(), u.space_grid());
  const auto& tg = u.time_grid();
  const auto& xg = u.space_grid();
  for (int i = 0; i < u.nt(); ++i)
    for (int j = 0; j < u.nx(); ++j) {
      const double t = tg.t(i), x = xg.x(j), v = u.at(i, j);
      double w = s.eta(t, x, v);
      if (!s.xi0_zero) w -= s.xi0(t, x, v) * ut.at(i, j);
      if (!s.xi1_zero) w -= s.xi1(t, x, v) * ux.at(i, j);
      W(i, j) = w;
    }
  return W;
}

// ------------------------------------------------------------- substitutions

std::string to_string(AdjointRegime r) {
  switch (r) {
    case AdjointRegime::RL_sub: return "RL_sub";
    case AdjointRegime::RL_wave: return "RL_wave";
    case AdjointRegime::Caputo_sub: return "Caputo_sub";
    case AdjointRegime::Caputo_wave: return "Caputo_wave";
    case AdjointRegime::Linear_particular: return "Linear_particular";
  }
  return "?";
}

AdjointRegime parse_adjoint_regime(const std::string& s) {
  for (auto r : {AdjointRegime::RL_sub, AdjointRegime::RL_wave, AdjointRegime::Caputo_sub, AdjointRegime::Caputo_wave,
                 AdjointRegime::Linear_particular})
    if (to_string(r) == s) return r;
  throw ValidationError("unknown substitution regime '" + s + "'");
}

AdjointRegime default_regime(const FractionalSpec& spec) {
  const bool sub = spec.subdiffusion();
  if (spec.kind == DerivativeKind::RiemannLiouville) return sub ? AdjointRegime::RL_sub : AdjointRegime::RL_wave;
  return sub ? AdjointRegime::Caputo_sub : AdjointRegime::Caputo_wave;
}

AdjointSubstitution adjoint_substitution(AdjointRegime regime, const FractionalSpec& spec, std::array<double, 4> c) {
  if (regime != AdjointRegime::Linear_particular && regime != default_regime(spec))
    throw ValidationError("substitution: regime " + to_string(regime) + " does not match " + to_string(spec.kind) +
                          " with alpha = " + std::to_string(spec.alpha));
  int used = 4;
  if (regime == AdjointRegime::Linear_particular) used = 1;
  if (regime == AdjointRegime::RL_sub || regime == AdjointRegime::Caputo_sub) used = 2;
  bool any = false;
  for (int k = 0; k < used; ++k) any = any || c[k] != 0.0;
  if (!any) throw ValidationError("substitution: all constants are zero, which gives the zero substitution");
  for (int k = used; k < 4; ++k) c[k] = 0.0;
  return {regime, spec, c};
}

double AdjointSubstitution::operator()(double t, double x) const {
  const double a = spec.alpha, T = spec.T;
  switch (regime) {
    case AdjointRegime::RL_sub: return c[0] + c[1] * x;
    case AdjointRegime::RL_wave: return c[0] + c[1] * x + (c[2] + c[3] * x) * t;
    case AdjointRegime::Caputo_sub: return std::pow(T - t, a - 1.0) * (c[0] + c[1] * x);
    case AdjointRegime::Caputo_wave:
      return std::pow(T - t, a - 2.0) * (c[0] + c[2] * x + (T - t) * (c[1] + c[3] * x));
    case AdjointRegime::Linear_particular:
      return spec.kind == DerivativeKind::RiemannLiouville ? c[0] * std::pow(t, a - 1.0) * x : c[0] * t * x;
  }
  return 0.0;
}

GridFunction AdjointSubstitution::field(const TimeGrid& tg, const SpaceGrid& xg) const {
  const double a = spec.alpha, T = tg.T;
  GridFunction v(tg, xg);
  auto coef = [&](double p, double q) {
    std::vector<double> out(xg.nodes());
    for (int j = 0; j < xg.nodes(); ++j) out[j] = p + q * xg.x(j);
    return out;
  };
  switch (regime) {
    case AdjointRegime::RL_sub:
      v.terms().push_back({0.0, Anchor::Right, coef(c[0], c[1])});
      break;
    case AdjointRegime::RL_wave:
      // c + d t = (c + d T) - d (T - t): right-anchored exponents 0 and 1
      v.terms().push_back({0.0, Anchor::Right, coef(c[0] + c[2] * T, c[1] + c[3] * T)});
      v.terms().push_back({1.0, Anchor::Right, coef(-c[2], -c[3])});
      break;
    case AdjointRegime::Caputo_sub:
      v.terms().push_back({a - 1.0, Anchor::Right, coef(c[0], c[1])});
      break;
    case AdjointRegime::Caputo_wave:
      v.terms().push_back({a - 2.0, Anchor::Right, coef(c[0], c[2])});
      v.terms().push_back({a - 1.0, Anchor::Right, coef(c[1], c[3])});
      break;
    case AdjointRegime::Linear_particular:
      if (spec.kind == DerivativeKind::RiemannLiouville)
        v.terms().push_back({a - 1.0, Anchor::Left, coef(0.0, c[0])});
      else
        for (int i = 0; i < tg.nodes(); ++i)
          for (int j = 0; j < xg.nodes(); ++j) v(i, j) = c[0] * tg.t(i) * xg.x(j);
      break;
  }
  return v;
}

std::string AdjointSubstitution::describe() const {
  std::ostringstream os;
  os << to_string(regime) << " c=(" << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << ")";
  return os.str();
}

GridFunction adjoint_residual(const GridFunction& v, const GridFunction& u, const Diffusivity& d,
                              const FractionalSpec& spec) {
  require_same_grid(v, u, "adjoint_residual");
  const GridFunction Dv = spec.kind == DerivativeKind::RiemannLiouville
                              ? fracops::caputo_right_derivative(v, spec.alpha)
                              : fracops::rl_right_derivative(v, spec.alpha);
  const GridFunction vxx = dxx(v);
  GridFunction out(u.time_grid(), u.space_grid());
  for (int i = 0; i < u.nt(); ++i)
    for (int j = 0; j < u.nx(); ++j) {
      const double second = vxx.at(i, j);
      // skip k(u) where v_xx vanishes so singular u does not poison exact zeros
      out(i, j) = Dv.at(i, j) - (second == 0.0 ? 0.0 : d.k(u.at(i, j)) * second);
    }
  return out;
}

}  // namespace fcl
