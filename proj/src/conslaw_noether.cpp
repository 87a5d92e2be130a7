#include <sstream>

#include "fcl/conslaw.hpp"
#include "fcl/errors.hpp"

namespace fcl {

namespace fo = fracops;

namespace {

GridFunction time_derivative_n(const GridFunction& f, int k) {
  if (k == 0) return f;
  return k == 1 ? dt(f) : dtt(f);
}

// out += c * xi(t,x,u) * L pointwise
void add_xi_L(GridFunction& out, const std::function<double(double, double, double)>& xi, const GridFunction& u,
              const GridFunction& L) {
  const auto& tg = u.time_grid();
  const auto& xg = u.space_grid();
  for (int i = 0; i < u.nt(); ++i)
    for (int j = 0; j < u.nx(); ++j) out(i, j) += xi(tg.t(i), xg.x(j), u.at(i, j)) * L(i, j);
}

}  // namespace

GridFunction formal_lagrangian(const GridFunction& u, const GridFunction& v, const Diffusivity& d,
                               const FractionalSpec& spec) {
  return hadamard(v, tfde_residual(u, spec, d));
}

GridFunction noether_t(const Symmetry& s, const GridFunction& u, const GridFunction& v, const Diffusivity& d,
                       const FractionalSpec& spec, fo::Exec exec) {
  require_same_grid(u, v, "noether_t");
  const double a = spec.alpha;
  const int n = spec.n();
  const GridFunction W = characteristic(s, u);
  GridFunction C(u.time_grid(), u.space_grid());
  if (spec.kind == DerivativeKind::RiemannLiouville) {
    for (int k = 0; k < n; ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      C = C + sign * hadamard(fo::left_rl_order(W, a - 1.0 - k, exec), time_derivative_n(v, k));
    }
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    C = C - sign * fo::j_integral(W, time_derivative_n(v, n), a, exec).densified();
  } else {
    for (int k = 0; k < n; ++k)
      C = C + hadamard(time_derivative_n(W, k), fo::right_rl_order(v, a - 1.0 - k, exec));
    C = C - fo::j_integral(time_derivative_n(W, n), v, a, exec).densified();
  }
  if (!s.xi0_zero) add_xi_L(C, s.xi0, u, formal_lagrangian(u, v, d, spec));
  return C;
}

GridFunction noether_x(const Symmetry& s, const GridFunction& u, const GridFunction& v, const Diffusivity& d,
                       const FractionalSpec& spec) {
  require_same_grid(u, v, "noether_x");
  const GridFunction W = characteristic(s, u);
  const GridFunction Wx = dx(W), ux = dx(u), vx = dx(v);
  GridFunction C(u.time_grid(), u.space_grid());
  for (int i = 0; i < u.nt(); ++i)
    for (int j = 0; j < u.nx(); ++j) {
      const double uu = u.at(i, j), vv = v.at(i, j), k = d.k(uu);
      C(i, j) = W.at(i, j) * (vx.at(i, j) * k - vv * d.dk(uu) * ux.at(i, j)) - vv * k * Wx.at(i, j);
    }
  if (!s.xi1_zero) add_xi_L(C, s.xi1, u, formal_lagrangian(u, v, d, spec));
  return C;
}

std::string noether_id(SymmetryId s, const AdjointSubstitution& sub) {
  std::ostringstream os;
  os << "Noether:" << to_string(s) << ':' << to_string(sub.regime) << ':' << sub.c[0] << ';' << sub.c[1] << ';'
     << sub.c[2] << ';' << sub.c[3];
  return os.str();
}

ConservedVectorEval noether_vector(const Symmetry& s, const AdjointSubstitution& sub) {
  ConservedVectorEval cv;
  cv.provenance = noether_id(s.id, sub);
  cv.description = "Noether operators on the formal Lagrangian, " + s.describe + ", v = " + sub.describe();
  cv.singular_at_T = sub.regime == AdjointRegime::Caputo_sub || sub.regime == AdjointRegime::Caputo_wave;
  cv.eval = [s, sub, id = cv.provenance](const VectorInputs& in) {
    Symmetry sym = s;
    if (sym.id == SymmetryId::Xinf && !sym.h && in.h) sym.h = in.h;
    const GridFunction v = sub.field(in.u.time_grid(), in.u.space_grid());
    return ConservedVector{id, noether_t(sym, in.u, v, in.diffusivity, in.spec, in.exec),
                           noether_x(sym, in.u, v, in.diffusivity, in.spec)};
  };
  return cv;
}

}  // namespace fcl
