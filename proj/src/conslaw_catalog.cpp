#include <cmath>
#include <map>

#include "fcl/conslaw.hpp"
#include "fcl/errors.hpp"
#include "fcl/specialfn.hpp"

namespace fcl {

namespace fo = fracops;

namespace {

using Fn = std::function<double(double)>;

// -- small field toolkit --------------------------------------------------------

GridFunction mul(const GridFunction& a, const GridFunction& b) { return hadamard(a, b); }

// f(t_i, x_j) * g(t_i)
GridFunction tmul(const GridFunction& f, const Fn& g) {
  GridFunction out(f.time_grid(), f.space_grid());
  for (int i = 0; i < f.nt(); ++i) {
    const double w = g(f.time_grid().t(i));
    for (int j = 0; j < f.nx(); ++j) out(i, j) = w * f.at(i, j);
  }
  return out;
}

GridFunction xmul(const GridFunction& f) {
  return scale_x(f, [](double x) { return x; });
}
GridFunction tpow(const GridFunction& f, int p) { return mul_tpow(f, p); }

// -k(u) u_x, taken as -d/dx K(u) (conservative form)
GridFunction kflux(const GridFunction& u, const Diffusivity& d) {
  return -1.0 * dx(map(u, [&d](double v) { return d.K(v); }));
}

// K(u) - x k(u) u_x
GridFunction kflux_x(const GridFunction& u, const Diffusivity& d) {
  const GridFunction K = map(u, [&d](double v) { return d.K(v); });
  return K - xmul(dx(K));
}

// row vector g(x_j) broadcast in time
GridFunction from_x(const GridFunction& like, const Fn& g) {
  return GridFunction::sample(like.time_grid(), like.space_grid(), [&](double, double x) { return g(x); });
}

GridFunction initial_row(const VectorInputs& in, const Fn& data, bool velocity) {
  if (data) return from_x(in.u, data);
  if (velocity) throw ValidationError("u1: vector needs the initial velocity u_t(0,x)");
  GridFunction out(in.u.time_grid(), in.u.space_grid());
  for (int i = 0; i < out.nt(); ++i)
    for (int j = 0; j < out.nx(); ++j) out(i, j) = in.u.at(0, j);
  return out;
}

struct Ctx {
  const VectorInputs& in;
  double a, T;
  fo::Exec ex;

  explicit Ctx(const VectorInputs& i) : in(i), a(i.spec.alpha), T(i.spec.T), ex(i.exec) {}

  GridFunction I(const GridFunction& f, double mu) const { return fo::left_frac_integral(f, mu, ex); }
  GridFunction D(const GridFunction& f, double order) const { return fo::left_rl_order(f, order, ex); }
  GridFunction RI(const GridFunction& f, double mu) const { return fo::right_frac_integral(f, mu, ex); }
  GridFunction RD(const GridFunction& f, double order) const { return fo::right_rl_order(f, order, ex); }
  GridFunction J(const GridFunction& f, const GridFunction& g) const {
    return fo::j_integral(f, g, a, ex).densified();
  }
  // (T-t)^p 0I^mu( f / (T-t) ), optionally with the 2F1(1,1;2-alpha;.) kernel
  GridFunction weighted(const GridFunction& f, double mu, double p, bool modified) const {
    const double TT = T, aa = a;
    fo::WeightedLeftIntegral::Kernel k = [TT, p, aa, modified](double t, double tau) {
      double w = std::pow(TT - t, p) / (TT - tau);
      if (modified) w *= specialfn::hyp2f1(1.0, 1.0, 2.0 - aa, (t - tau) / (TT - tau));
      return w;
    };
    return fo::weighted_left_integral(f, mu, k, true, ex);
  }
  Fn Tpow(double p) const {
    const double TT = T;
    return [TT, p](double t) { return std::pow(TT - t, p); };
  }
};

// -- catalog entries ------------------------------------------------------------

enum class Need { Any, Linear, PowerRL };  // diffusivity requirement
struct Entry {
  DerivativeKind kind;
  int regime;  // 0 any alpha, 1 subdiffusion, 2 diffusion-wave
  Need need;
  bool singular_at_T;
  bool needs_substitution;
  std::string description;
  std::function<std::pair<GridFunction, GridFunction>(const Ctx&)> make;
};

using RL = std::integral_constant<DerivativeKind, DerivativeKind::RiemannLiouville>;

const GridFunction& phi_of(const Ctx& c) {
  if (!c.in.v) throw ValidationError("substitution: the linear catalog vectors need a solution phi of the adjoint equation");
  return *c.in.v;
}

GridFunction linear_W(const Ctx& c, SymmetryId id) {
  Symmetry s = find_symmetry(id, c.in.spec.kind, c.a, Diffusivity::constant(c.in.diffusivity.k0));
  if (id == SymmetryId::Xinf) {
    if (!c.in.h) throw ValidationError("h: the Xinf vectors need a solution h of the linear equation");
    s = with_h(s, *c.in.h);
  }
  return characteristic(s, c.in.u);
}

// phi_x W - phi W_x (scaled by k0)
GridFunction linear_cx(const Ctx& c, const GridFunction& W) {
  const auto& phi = phi_of(c);
  return c.in.diffusivity.k0 * (mul(dx(phi), W) - mul(phi, dx(W)));
}

// -w u_x + w_x u   (w = phi_x for the X1 forms)
GridFunction linear_cx_alt(const Ctx& c, const GridFunction& w) {
  const auto& u = c.in.u;
  return c.in.diffusivity.k0 * (mul(dx(w), u) - mul(w, dx(u)));
}

GridFunction w_of(const Ctx& c) {
  const auto& phi = phi_of(c);
  return 2.0 * tpow(dt(phi), 1) + c.a * xmul(dx(phi));
}

// phi(T, x) broadcast in time
GridFunction phi_T(const Ctx& c) {
  const auto& phi = phi_of(c);
  GridFunction out(phi.time_grid(), phi.space_grid());
  const int N = phi.nt() - 1;
  for (int i = 0; i < phi.nt(); ++i)
    for (int j = 0; j < phi.nx(); ++j) out(i, j) = phi.at(N, j);
  return out;
}

std::map<std::string, Entry> build_catalog() {
  std::map<std::string, Entry> m;
  const auto RLk = DerivativeKind::RiemannLiouville;
  const auto CAk = DerivativeKind::Caputo;

  m["Trivial_RL"] = {RLk, 0, Need::Any, false, false, "C^t = D^{n-1} 0I^{n-alpha} u, C^x = -k u_x",
                     [](const Ctx& c) { return std::pair{c.D(c.in.u, c.a - 1.0), kflux(c.in.u, c.in.diffusivity)}; }};
  m["Trivial_Caputo"] = {CAk, 0, Need::Any, false, false, "C^t = 0I^{n+1-alpha} D^n u, C^x = -k u_x",
                         [](const Ctx& c) {
                           const int n = c.in.spec.n();
                           const GridFunction Dn = n == 1 ? dt(c.in.u) : dtt(c.in.u);
                           return std::pair{c.I(Dn, n + 1.0 - c.a), kflux(c.in.u, c.in.diffusivity)};
                         }};

  // linear equation, generic forms with W_i
  const std::pair<const char*, SymmetryId> syms[] = {
      {"X1", SymmetryId::X1}, {"X2", SymmetryId::X2}, {"X3", SymmetryId::X3_lin}, {"Xinf", SymmetryId::Xinf}};
  for (const auto& [name, id] : syms) {
    const SymmetryId sid = id;
    m[std::string("Linear_RL_sub_") + name] = {
        RLk, 1, Need::Linear, false, true, "C^t = phi 0I^{1-alpha} W + J(W, phi_t), C^x = phi_x W - phi W_x",
        [sid](const Ctx& c) {
          const auto& phi = phi_of(c);
          const GridFunction W = linear_W(c, sid);
          return std::pair{mul(phi, c.I(W, 1.0 - c.a)) + c.J(W, dt(phi)), linear_cx(c, W)};
        }};
    m[std::string("Linear_RL_wave_") + name] = {
        RLk, 2, Need::Linear, false, true,
        "C^t = phi 0D^{alpha-1} W - phi_t 0I^{2-alpha} W - J(W, phi_tt), C^x = phi_x W - phi W_x",
        [sid](const Ctx& c) {
          const auto& phi = phi_of(c);
          const GridFunction W = linear_W(c, sid);
          return std::pair{mul(phi, c.D(W, c.a - 1.0)) - mul(dt(phi), c.I(W, 2.0 - c.a)) - c.J(W, dtt(phi)),
                           linear_cx(c, W)};
        }};
    m[std::string("Linear_Cap_sub_") + name] = {
        CAk, 1, Need::Linear, true, true, "C^t = W tI^{1-alpha}_T phi - J(W_t, phi), C^x = phi_x W - phi W_x",
        [sid](const Ctx& c) {
          const auto& phi = phi_of(c);
          const GridFunction W = linear_W(c, sid);
          return std::pair{mul(W, c.RI(phi, 1.0 - c.a)) - c.J(dt(W), phi), linear_cx(c, W)};
        }};
    m[std::string("Linear_Cap_wave_") + name] = {
        CAk, 2, Need::Linear, true, true,
        "C^t = W tD^{alpha-1}_T phi + W_t tI^{2-alpha}_T phi - J(W_tt, phi), C^x = phi_x W - phi W_x",
        [sid](const Ctx& c) {
          const auto& phi = phi_of(c);
          const GridFunction W = linear_W(c, sid);
          return std::pair{mul(W, c.RD(phi, c.a - 1.0)) + mul(dt(W), c.RI(phi, 2.0 - c.a)) - c.J(dtt(W), phi),
                           linear_cx(c, W)};
        }};
  }

  // linear equation, rewritten X1/X2 forms
  m["Linear_RL_sub_X1_alt"] = {RLk, 1, Need::Linear, false, true,
                               "C^t = phi_x 0I^{1-alpha} u + J(u, phi_tx), C^x = -phi_x u_x + phi_xx u",
                               [](const Ctx& c) {
                                 const auto& u = c.in.u;
                                 const GridFunction px = dx(phi_of(c));
                                 return std::pair{mul(px, c.I(u, 1.0 - c.a)) + c.J(u, dt(px)), linear_cx_alt(c, px)};
                               }};
  m["Linear_RL_sub_X2_alt"] = {
      RLk, 1, Need::Linear, false, true, "rewritten X2 vector, subdiffusion, RL", [](const Ctx& c) {
        const auto& u = c.in.u;
        const auto& phi = phi_of(c);
        const GridFunction w = w_of(c), pt = dt(phi), ptx = dx(pt);
        const GridFunction Iu = c.I(u, 1.0 - c.a);
        const GridFunction bracket = mul(pt, Iu) - mul(u, c.RI(pt, 1.0 - c.a));
        const GridFunction f = tpow(dt(u), 1) - (c.a - 1.0) * u;
        const GridFunction Ct = mul(w, Iu) - 2.0 * tpow(bracket, 1) + 2.0 * c.J(f, pt) - c.a * xmul(c.J(u, ptx));
        return std::pair{Ct, linear_cx_alt(c, w)};
      }};
  m["Linear_RL_wave_X1_alt"] = {
      RLk, 2, Need::Linear, false, true,
      "C^t = phi_x 0D^{alpha-1} u - phi_tx 0I^{2-alpha} u - J(u, phi_ttx), C^x = -phi_x u_x + phi_xx u",
      [](const Ctx& c) {
        const auto& u = c.in.u;
        const GridFunction px = dx(phi_of(c));
        return std::pair{mul(px, c.D(u, c.a - 1.0)) - mul(dt(px), c.I(u, 2.0 - c.a)) - c.J(u, dtt(px)),
                         linear_cx_alt(c, px)};
      }};
  m["Linear_RL_wave_X2_alt"] = {
      RLk, 2, Need::Linear, false, true, "rewritten X2 vector, diffusion-wave, RL", [](const Ctx& c) {
        const auto& u = c.in.u;
        const auto& phi = phi_of(c);
        const GridFunction w = w_of(c), ptt = dtt(phi), pttx = dx(ptt);
        const GridFunction I2 = c.I(u, 2.0 - c.a);
        const GridFunction bracket = mul(ptt, I2) - mul(u, c.RI(ptt, 2.0 - c.a));
        const GridFunction f = tpow(dt(u), 1) - (c.a - 1.0) * u;
        const GridFunction Ct = mul(w, c.D(u, c.a - 1.0)) - mul(dt(w), I2) + 2.0 * tpow(bracket, 1) +
                                2.0 * c.J(f, ptt) - c.a * xmul(c.J(u, pttx));
        return std::pair{Ct, linear_cx_alt(c, w)};
      }};
  m["Linear_Cap_sub_X1_alt"] = {CAk, 1, Need::Linear, true, true,
                                "C^t = u tI^{1-alpha}_T phi_x - J(u_t, phi_x), C^x = -phi_x u_x + phi_xx u",
                                [](const Ctx& c) {
                                  const auto& u = c.in.u;
                                  const GridFunction px = dx(phi_of(c));
                                  return std::pair{mul(u, c.RI(px, 1.0 - c.a)) - c.J(dt(u), px), linear_cx_alt(c, px)};
                                }};
  m["Linear_Cap_sub_X2_alt"] = {
      CAk, 1, Need::Linear, true, true, "rewritten X2 vector, subdiffusion, Caputo", [](const Ctx& c) {
        const auto& u = c.in.u;
        const auto& phi = phi_of(c);
        const GridFunction w = w_of(c), ut = dt(u);
        const double b = -2.0 * c.T * specialfn::rgamma(1.0 - c.a);
        const GridFunction boundary = b * tmul(mul(u, phi_T(c)), c.Tpow(-c.a));
        const GridFunction bracket = mul(ut, c.RI(phi, 1.0 - c.a)) - mul(phi, c.I(ut, 1.0 - c.a));
        const GridFunction f = tpow(dtt(u), 1) - (c.a - 2.0) * ut;
        const GridFunction Ct = boundary + mul(u, c.RI(w, 1.0 - c.a)) - 2.0 * tpow(bracket, 1) + 2.0 * c.J(f, phi) -
                                c.a * xmul(c.J(ut, dx(phi)));
        return std::pair{Ct, linear_cx_alt(c, w)};
      }};
  m["Linear_Cap_wave_X1_alt"] = {
      CAk, 2, Need::Linear, true, true,
      "C^t = u tD^{alpha-1}_T phi_x + u_t tI^{2-alpha}_T phi_x - J(u_tt, phi_x), C^x = -phi_x u_x + phi_xx u",
      [](const Ctx& c) {
        const auto& u = c.in.u;
        const GridFunction px = dx(phi_of(c));
        return std::pair{mul(u, c.RD(px, c.a - 1.0)) + mul(dt(u), c.RI(px, 2.0 - c.a)) - c.J(dtt(u), px),
                         linear_cx_alt(c, px)};
      }};
  m["Linear_Cap_wave_X2_alt"] = {
      CAk, 2, Need::Linear, true, true, "rewritten X2 vector, diffusion-wave, Caputo", [](const Ctx& c) {
        const auto& u = c.in.u;
        const auto& phi = phi_of(c);
        const GridFunction w = w_of(c), ut = dt(u), utt = dtt(u);
        const GridFunction pT = phi_T(c);
        const GridFunction boundary = -2.0 * c.T * specialfn::rgamma(1.0 - c.a) * tmul(mul(u, pT), c.Tpow(-c.a)) -
                                      2.0 * c.T * specialfn::rgamma(2.0 - c.a) * tmul(mul(ut, pT), c.Tpow(1.0 - c.a));
        const GridFunction bracket = mul(utt, c.RI(phi, 2.0 - c.a)) - mul(phi, c.I(utt, 2.0 - c.a));
        const GridFunction f = tpow(dt(utt), 1) - (c.a - 3.0) * utt;
        const GridFunction Ct = boundary + mul(ut, c.RI(w, 2.0 - c.a)) + mul(u, c.RD(w, c.a - 1.0)) -
                                2.0 * tpow(bracket, 1) + 2.0 * c.J(f, phi) - c.a * xmul(c.J(utt, dx(phi)));
        return std::pair{Ct, linear_cx_alt(c, w)};
      }};

  // nonlinear RL subdiffusion
  m["NL_RL_sub"] = {RLk, 1, Need::Any, false, false, "C^t = x 0I^{1-alpha} u, C^x = K(u) - x k u_x",
                    [](const Ctx& c) { return std::pair{xmul(c.I(c.in.u, 1.0 - c.a)), kflux_x(c.in.u, c.in.diffusivity)}; }};
  m["NL_RL_sub_t1"] = {RLk, 1, Need::PowerRL, false, false,
                       "C^t = t 0I^{1-alpha} u - 0I^{2-alpha} u, C^x = -t k u_x", [](const Ctx& c) {
                         const auto& u = c.in.u;
                         return std::pair{tpow(c.I(u, 1.0 - c.a), 1) - c.I(u, 2.0 - c.a),
                                          tpow(kflux(u, c.in.diffusivity), 1)};
                       }};
  m["NL_RL_sub_t2"] = {
      RLk, 1, Need::PowerRL, false, false,
      "C^t = x (t 0I^{1-alpha} u - 0I^{2-alpha} u), C^x = t k ((1-alpha)/(1+alpha) u - x u_x)", [](const Ctx& c) {
        const auto& u = c.in.u;
        const auto& d = c.in.diffusivity;
        const double q = (1.0 - c.a) / (1.0 + c.a);
        const GridFunction ku = map(u, [&d](double v) { return v * d.k(v); });
        const GridFunction Cx = tpow(q * ku + xmul(kflux(u, d)), 1);
        return std::pair{xmul(tpow(c.I(u, 1.0 - c.a), 1) - c.I(u, 2.0 - c.a)), Cx};
      }};

  // RL diffusion-wave
  auto t1 = [](int v, bool alt) {
    return [v, alt](const Ctx& c) {
      const auto& u = c.in.u;
      const auto& d = c.in.diffusivity;
      const GridFunction Da = c.D(u, c.a - 1.0);
      switch (v) {
        case 1: return std::pair{Da, kflux(u, d)};
        case 2: return std::pair{tpow(Da, 1) - c.I(u, 2.0 - c.a), tpow(kflux(u, d), 1)};
        case 3: return std::pair{xmul(Da), kflux_x(u, d)};
        case 4: return std::pair{xmul(tpow(Da, 1) - c.I(u, 2.0 - c.a)), tpow(kflux_x(u, d), 1)};
        case 5:
          return std::pair{tpow(Da, 2) - 2.0 * tpow(c.I(u, 2.0 - c.a), 1) + 2.0 * c.I(u, 3.0 - c.a),
                           tpow(kflux(u, d), 2)};
        default: {
          const GridFunction last = alt ? c.I(u, 3.0 - c.a) : c.I(u, 2.0 - c.a);
          return std::pair{xmul(tpow(Da, 2) - 2.0 * tpow(c.I(u, 2.0 - c.a), 1) + 2.0 * last), tpow(kflux_x(u, d), 2)};
        }
      }
    };
  };
  const char* t1_desc[] = {"",
                           "C^t = 0D^{alpha-1} u, C^x = -k u_x",
                           "C^t = t 0D^{alpha-1} u - 0I^{2-alpha} u, C^x = -t k u_x",
                           "C^t = x 0D^{alpha-1} u, C^x = K - x k u_x",
                           "C^t = tx 0D^{alpha-1} u - x 0I^{2-alpha} u, C^x = tK - tx k u_x",
                           "C^t = t^2 0D^{alpha-1} u - 2t 0I^{2-alpha} u + 2 0I^{3-alpha} u, C^x = -t^2 k u_x",
                           "C^t = t^2x 0D^{alpha-1} u - 2tx 0I^{2-alpha} u + 2x 0I^{2-alpha} u, C^x = t^2K - t^2x k u_x"};
  for (int v = 1; v <= 6; ++v)
    m["Table1_v" + std::to_string(v)] = {RLk, 2, Need::Any, false, false, t1_desc[v], t1(v, false)};
  m["Table1_v6_alt"] = {RLk, 2, Need::Any, false, false,
                        "C^t = t^2x 0D^{alpha-1} u - 2tx 0I^{2-alpha} u + 2x 0I^{3-alpha} u, C^x = t^2K - t^2x k u_x",
                        t1(6, true)};

  // Caputo subdiffusion
  auto t3 = [](int v) {
    return [v](const Ctx& c) {
      const auto& u = c.in.u;
      const auto& d = c.in.diffusivity;
      GridFunction Ct;
      double p;
      if (v % 2 == 1) {
        const GridFunction u0 = initial_row(c.in, c.in.u0, false);
        const double aa = c.a, TT = c.T;
        Ct = tmul(u0, [aa, TT](double t) { return specialfn::phi_sub(t, aa, TT); }) +
             c.weighted(u, 1.0 - c.a, c.a, false);
        p = c.a - 1.0;
      } else {
        Ct = c.weighted(dt(u), 2.0 - c.a, c.a - 1.0, false);
        p = c.a - 2.0;
      }
      if (v <= 2) return std::pair{Ct, tmul(kflux(u, d), c.Tpow(p))};
      return std::pair{xmul(Ct), tmul(kflux_x(u, d), c.Tpow(p))};
    };
  };
  const char* t3_desc[] = {"",
                           "C^t = u(0,x) Phi + (T-t)^alpha 0I^{1-alpha}(u/(T-t)), C^x = -(T-t)^{alpha-1} k u_x",
                           "C^t = (T-t)^{alpha-1} 0I^{2-alpha}(u_t/(T-t)), C^x = -(T-t)^{alpha-2} k u_x",
                           "x times vector 1, C^x = (T-t)^{alpha-1} (K - x k u_x)",
                           "x times vector 2, C^x = (T-t)^{alpha-2} (K - x k u_x)"};
  for (int v = 1; v <= 4; ++v) m["Table3_v" + std::to_string(v)] = {CAk, 1, Need::Any, true, false, t3_desc[v], t3(v)};

  // Caputo diffusion-wave
  auto t5 = [](int v) {
    return [v](const Ctx& c) {
      const auto& u = c.in.u;
      const auto& d = c.in.diffusivity;
      const int r = (v - 1) % 3;  // 0: I^{3-a} u_tt, 1: Phi, 2: Psi
      const double aa = c.a, TT = c.T;
      GridFunction Ct;
      if (r == 0) {
        Ct = c.weighted(dtt(u), 3.0 - c.a, c.a - 2.0, false);
      } else {
        const GridFunction u1 = initial_row(c.in, c.in.u1, true);
        const GridFunction kernel = tmul(u1, [aa, TT, r](double t) {
          const auto [phi, psi] = specialfn::phi_psi_wave(t, aa, TT);
          return r == 1 ? phi : psi;
        });
        Ct = kernel + (r == 1 ? c.weighted(dt(u), 2.0 - c.a, c.a - 1.0, false)
                              : c.weighted(dt(u), 2.0 - c.a, c.a, true));
      }
      const double p = c.a - 3.0 + r;
      if (v <= 3) return std::pair{Ct, tmul(kflux(u, d), c.Tpow(p))};
      return std::pair{xmul(Ct), tmul(kflux_x(u, d), c.Tpow(p))};
    };
  };
  const char* t5_desc[] = {"",
                           "C^t = (T-t)^{alpha-2} 0I^{3-alpha}(u_tt/(T-t)), C^x = -(T-t)^{alpha-3} k u_x",
                           "C^t = Phi u_t(0,x) + (T-t)^{alpha-1} 0I^{2-alpha}(u_t/(T-t)), C^x = -(T-t)^{alpha-2} k u_x",
                           "C^t = Psi u_t(0,x) + (T-t)^alpha F0I^{2-alpha}(u_t/(T-t)), C^x = -(T-t)^{alpha-1} k u_x",
                           "x times vector 1, C^x = (T-t)^{alpha-3} (K - x k u_x)",
                           "x times vector 2, C^x = (T-t)^{alpha-2} (K - x k u_x)",
                           "x times vector 3, C^x = (T-t)^{alpha-1} (K - x k u_x)"};
  for (int v = 1; v <= 6; ++v) m["Table5_v" + std::to_string(v)] = {CAk, 2, Need::Any, true, false, t5_desc[v], t5(v)};
  return m;
}

const std::map<std::string, Entry>& catalog() {
  static const std::map<std::string, Entry> m = build_catalog();
  return m;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  std::vector<std::string> out;
  for (const auto& [id, e] : catalog()) out.push_back(id);
  return out;
}

bool catalog_admissible(const std::string& id, const FractionalSpec& spec, const Diffusivity& d) {
  const auto it = catalog().find(id);
  if (it == catalog().end()) return false;
  const Entry& e = it->second;
  if (e.kind != spec.kind) return false;
  if (e.regime == 1 && !spec.subdiffusion()) return false;
  if (e.regime == 2 && spec.subdiffusion()) return false;
  switch (e.need) {
    case Need::Any: return true;
    case Need::Linear: return d.linear();
    case Need::PowerRL:
      return d.family == DiffusivityFamily::Power &&
             std::fabs(d.beta - 2.0 * spec.alpha / (1.0 - spec.alpha)) <= 1e-12 * std::max(1.0, std::fabs(d.beta));
  }
  return false;
}

ConservedVectorEval catalog_vector(const std::string& id, const FractionalSpec& spec, const Diffusivity& d) {
  const auto it = catalog().find(id);
  if (it == catalog().end()) throw ValidationError("vector: unknown catalog id '" + id + "'");
  if (!catalog_admissible(id, spec, d))
    throw ValidationError("vector: " + id + " is not available for " + to_string(spec.kind) +
                          ", alpha = " + std::to_string(spec.alpha) + ", k = " + d.describe());
  const Entry& e = it->second;
  ConservedVectorEval cv;
  cv.provenance = id;
  cv.description = e.description;
  cv.singular_at_T = e.singular_at_T;
  cv.needs_substitution = e.needs_substitution;
  cv.eval = [make = e.make, id](const VectorInputs& in) {
    Ctx c(in);
    auto [Ct, Cx] = make(c);
    return ConservedVector{id, std::move(Ct), std::move(Cx)};
  };
  return cv;
}

}  // namespace fcl
