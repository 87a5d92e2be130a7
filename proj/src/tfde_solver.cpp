#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "fcl/errors.hpp"
#include "fcl/fracops_field.hpp"
#include "fcl/specialfn.hpp"
#include "fcl/tfde.hpp"

namespace fcl {

void TFDEProblem::validate() const {
  if (!(x_hi > x_lo)) throw ValidationError("x_hi: must exceed x_lo");
  if (!r0) throw ValidationError("r0: initial data missing");
  if (!r_lo || !r_hi) throw ValidationError("boundary: both boundary traces are required");
  if (spec.n() == 2 && spec.kind == DerivativeKind::Caputo && !r1) throw ValidationError("r1: initial velocity missing");
  if (spec.kind == DerivativeKind::Caputo && !singular.empty())
    throw ValidationError("singular: singular modes are only meaningful for the RL kind");
  for (const auto& m : singular) {
    if (!m.profile) throw ValidationError("singular: mode without profile");
    if (!(m.exponent > -1.0)) throw ValidationError("singular: exponent must exceed -1");
  }
}

namespace {

// Tridiagonal solve (Thomas); sub/diag/sup are overwritten.
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c, std::vector<double>& d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Nonlinear step: find interior x with  diag*x + rhs - theta*G(x) = 0,
// G(x)_j = F(S + x)_j - DS_j.
class StepSolver {
 public:
  StepSolver(const Diffusivity& d, double dx, const SolverOptions& opt) : d_(d), dx_(dx), opt_(opt) {}

  // u_full: full values of u at the level except interior r, which is x.
  // s: singular part at the level (all nodes); bl/br: boundary values of r.
  void residual(const std::vector<double>& x, const std::vector<double>& s, double bl, double br, double diag,
                double theta, const std::vector<double>& rhs, const std::vector<double>& ds, std::vector<double>& R,
                std::vector<double>* lo, std::vector<double>* mid, std::vector<double>* up) const {
    const std::size_t m = x.size();
    auto u = [&](std::size_t j) {  // j in [0, m+1]
      const double r = j == 0 ? bl : (j == m + 1 ? br : x[j - 1]);
      return s[j] + r;
    };
    const double idx2 = 1.0 / (dx_ * dx_), i2dx = 0.5 / dx_;
    for (std::size_t k = 0; k < m; ++k) {
      const double um = u(k), uc = u(k + 1), up1 = u(k + 2);
      const double g = (up1 - um) * i2dx;
      const double lap = (up1 - 2.0 * uc + um) * idx2;
      const double kk = d_.k(uc), dk = d_.dk(uc);
      const double F = dk * g * g + kk * lap;
      R[k] = diag * x[k] + rhs[k] - theta * (F - ds[k]);
      if (mid) {
        (*mid)[k] = diag - theta * (d_.d2k(uc) * g * g + dk * lap - 2.0 * kk * idx2);
        (*lo)[k] = -theta * (-2.0 * dk * g * i2dx + kk * idx2);
        (*up)[k] = -theta * (2.0 * dk * g * i2dx + kk * idx2);
      }
    }
  }

  // Returns false when neither Newton nor the damped fixed point converges.
  bool solve(std::vector<double>& x, const std::vector<double>& s, double bl, double br, double diag, double theta,
             const std::vector<double>& rhs, const std::vector<double>& ds) const {
    const std::size_t m = x.size();
    std::vector<double> R(m), lo(m), mid(m), up(m);
    const std::vector<double> x0 = x;
    // Newton with backtracking.
    for (int it = 0; it < opt_.max_iter; ++it) {
      residual(x, s, bl, br, diag, theta, rhs, ds, R, &lo, &mid, &up);
      const double r0 = max_abs(R);
      if (!std::isfinite(r0)) break;
      std::vector<double> delta = R;
      thomas(lo, mid, up, delta);
      double lam = 1.0;
      std::vector<double> xn(m), Rn(m);
      bool accepted = false;
      for (int k = 0; k < 12; ++k) {
        for (std::size_t j = 0; j < m; ++j) xn[j] = x[j] - lam * delta[j];
        residual(xn, s, bl, br, diag, theta, rhs, ds, Rn, nullptr, nullptr, nullptr);
        const double rn = max_abs(Rn);
        if (std::isfinite(rn) && (rn <= r0 || rn <= 1e-14 * diag)) {
          accepted = true;
          break;
        }
        lam *= 0.5;
      }
      if (!accepted) break;
      x = xn;
      const double step = lam * max_abs(delta);
      if (step <= opt_.tol * (1.0 + max_abs(x))) return true;
    }
    // Damped fixed point  x <- x - omega R(x)/diag.
    x = x0;
    const double omega = 0.5;
    for (int it = 0; it < 50 * opt_.max_iter; ++it) {
      residual(x, s, bl, br, diag, theta, rhs, ds, R, nullptr, nullptr, nullptr);
      double step = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double dlt = omega * R[j] / diag;
        x[j] -= dlt;
        step = std::max(step, std::fabs(dlt));
      }
      if (!std::isfinite(step)) return false;
      if (step <= opt_.tol * (1.0 + max_abs(x))) return true;
    }
    return false;
  }

 private:
  const Diffusivity& d_;
  double dx_;
  SolverOptions opt_;
};

std::vector<double> l1_weights(double order, int N) {
  std::vector<double> b(N + 1);
  for (int k = 0; k <= N; ++k) b[k] = std::pow(k + 1.0, 1.0 - order) - std::pow(static_cast<double>(k), 1.0 - order);
  return b;
}

[[noreturn]] void fail(int i, double t, const std::string& why) {
  std::ostringstream os;
  os << "solve_nonlinear: " << why << " at step " << i << " (t = " << t << ")";
  throw SolverError(os.str());
}

}  // namespace

GridFunction solve_nonlinear(const TFDEProblem& p, const TimeGrid& tg, int n_x, const SolverOptions& opt) {
  p.validate();
  if (n_x < 2) throw ValidationError("n_x: need at least 2 space intervals");
  if (tg.n_steps < 2 * p.spec.n()) throw ValidationError("n_steps: grid too coarse for the derivative order");
  const SpaceGrid xg = SpaceGrid::make(p.x_lo, p.x_hi, n_x);
  const int N = tg.n_steps, nn = xg.nodes(), m = n_x - 1;
  const double h = tg.h(), alpha = p.spec.alpha;
  const int n = p.spec.n();
  const bool rl = p.spec.kind == DerivativeKind::RiemannLiouville;

  GridFunction r(tg, xg);
  for (int j = 0; j < nn; ++j) r(0, j) = p.r0(xg.x(j));

  // Singular part S and its analytic RL derivative at level i.
  std::vector<SingularMode> modes = p.singular;
  std::vector<std::vector<double>> prof;
  for (const auto& mode : modes) {
    std::vector<double> c(nn);
    for (int j = 0; j < nn; ++j) c[j] = mode.profile(xg.x(j));
    prof.push_back(std::move(c));
  }
  // RL: r(0,x) is carried as a t^0 mode so the stepped part starts from zero
  // and its fractional derivative stays bounded at t = 0.
  std::vector<double> base(nn, 0.0);
  if (rl) {
    for (int j = 0; j < nn; ++j) base[j] = r(0, j);
    modes.push_back({0.0, nullptr});
    prof.push_back(base);
    for (int j = 0; j < nn; ++j) r(0, j) = 0.0;
  }
  auto level_s = [&](int i, std::vector<double>& s, std::vector<double>& ds) {
    s.assign(nn, 0.0);
    ds.assign(m, 0.0);
    const double t = tg.t(i);
    for (std::size_t q = 0; q < modes.size(); ++q) {
      const double e = modes[q].exponent;
      const double te = e == 0.0 ? 1.0 : std::pow(t, e);
      const double dc = specialfn::gamma(e + 1.0) * specialfn::rgamma(e + 1.0 - alpha);
      const double tde = dc == 0.0 ? 0.0 : dc * std::pow(t, e - alpha);
      for (int j = 0; j < nn; ++j) s[j] += prof[q][j] * te;
      for (int k = 0; k < m; ++k) ds[k] += prof[q][k + 1] * tde;
    }
  };

  StepSolver step(p.diffusivity, xg.dx(), opt);
  std::vector<double> x(m), rhs(m), s, ds;
  auto set_boundary = [&](int i) {
    r(i, 0) = p.r_lo(tg.t(i)) - base[0];
    r(i, n_x) = p.r_hi(tg.t(i)) - base[n_x];
  };
  auto run = [&](int i, double diag, double theta) {
    for (int k = 0; k < m; ++k) x[k] = r(i - 1, k + 1);
    level_s(i, s, ds);
    if (!step.solve(x, s, r(i, 0), r(i, n_x), diag, theta, rhs, ds)) fail(i, tg.t(i), "nonlinear iteration did not converge");
    for (int k = 0; k < m; ++k) r(i, k + 1) = x[k];
  };
  // G at a converged level (interior), used by the two-level RL schemes.
  auto level_G = [&](int i) {
    std::vector<double> z(m, 0.0), R(m);
    for (int k = 0; k < m; ++k) z[k] = r(i, k + 1);
    level_s(i, s, ds);
    std::vector<double> zero(m, 0.0);
    step.residual(z, s, r(i, 0), r(i, n_x), 0.0, -1.0, zero, ds, R, nullptr, nullptr, nullptr);
    return R;  // = F - DS
  };

  if (!rl && n == 1) {
    const auto b = l1_weights(alpha, N);
    const double a = std::pow(h, -alpha) * specialfn::rgamma(2.0 - alpha);
    for (int i = 1; i <= N; ++i) {
      set_boundary(i);
      for (int k = 0; k < m; ++k) {
        double hist = -b[0] * r(i - 1, k + 1);
        for (int q = 0; q + 1 < i; ++q) hist += b[i - 1 - q] * (r(q + 1, k + 1) - r(q, k + 1));
        rhs[k] = a * hist;
      }
      run(i, a * b[0], 1.0);
    }
  } else if (!rl && n == 2) {
    const double beta = alpha - 1.0;
    const auto b = l1_weights(beta, N);
    const double a = std::pow(h, -beta) * specialfn::rgamma(2.0 - beta);
    std::vector<std::vector<double>> V(N + 1, std::vector<double>(nn));
    for (int j = 0; j < nn; ++j) V[0][j] = p.r1(xg.x(j));
    for (int i = 1; i <= N; ++i) {
      set_boundary(i);
      for (int k = 0; k < m; ++k) {
        const int j = k + 1;
        double hist = 0.0;
        for (int q = 0; q + 1 < i; ++q) hist += b[i - 1 - q] * (V[q + 1][j] - V[q][j]);
        rhs[k] = a * (b[0] * (-2.0 * r(i - 1, j) / h - 2.0 * V[i - 1][j]) + hist);
      }
      run(i, 2.0 * a * b[0] / h, 1.0);
      for (int j = 0; j < nn; ++j) V[i][j] = 2.0 * (r(i, j) - r(i - 1, j)) / h - V[i - 1][j];
    }
  } else {
    // RL: D_t^n W = G with W the product-integration image of r.
    const double mu = n - alpha;
    const auto w = fracops::detail::pi_weights(mu, N);
    const double d = std::pow(h, mu) * specialfn::rgamma(mu + 2.0);
    std::vector<std::vector<double>> W(N + 1, std::vector<double>(m, 0.0));
    std::vector<double> Gprev, Gprev2;
    auto known = [&](int i, int k) {  // W_i minus the diagonal contribution
      const int j = k + 1;
      double sum = w.a0[i] * r(0, j);
      for (int q = 1; q < i; ++q) sum += w.c[i - q] * r(q, j);
      return d * sum;
    };
    auto store_W = [&](int i) {
      for (int k = 0; k < m; ++k) W[i][k] = known(i, k) + d * r(i, k + 1);
    };
    std::vector<std::vector<double>> G(N + 1);
    for (int i = 1; i <= N; ++i) {
      set_boundary(i);
      if (n == 1) {
        if (i == 1) {
          for (int k = 0; k < m; ++k) rhs[k] = (known(i, k) - W[0][k]) / h;
          run(i, d / h, 1.0);
        } else {
          // BDF2: damps the stiff modes that Crank-Nicolson leaves next to
          // time-dependent boundary data.
          for (int k = 0; k < m; ++k) rhs[k] = (3.0 * known(i, k) - 4.0 * W[i - 1][k] + W[i - 2][k]) / (2.0 * h);
          run(i, 1.5 * d / h, 1.0);
        }
      } else {
        const double h2 = h * h;
        if (i == 1) {
          for (int k = 0; k < m; ++k) rhs[k] = known(i, k) / h2;
          run(i, d / h2, 0.5);
        } else if (i == 2) {
          for (int k = 0; k < m; ++k) rhs[k] = (known(i, k) - 2.0 * W[1][k] + W[0][k]) / h2;
          run(i, d / h2, 1.0);
        } else {
          for (int k = 0; k < m; ++k)
            rhs[k] = (known(i, k) - 2.0 * W[i - 1][k] + W[i - 2][k]) / h2 - 0.5 * G[i - 2][k];
          run(i, d / h2, 0.5);
        }
      }
      store_W(i);
      G[i] = level_G(i);
    }
  }

  for (int i = 0; i <= N; ++i)
    for (int j = 0; j < nn; ++j) r(i, j) += base[j];
  for (std::size_t q = 0; q < p.singular.size(); ++q)
    r.terms().push_back({p.singular[q].exponent, Anchor::Left, prof[q]});
  return r;
}

GridFunction diffusion_term(const GridFunction& u, const Diffusivity& d) {
  const GridFunction ux = dx(u), uxx = dxx(u);
  GridFunction out(u.time_grid(), u.space_grid());
  for (int i = 0; i < u.nt(); ++i)
    for (int j = 0; j < u.nx(); ++j) {
      const double v = u.at(i, j), g = ux.at(i, j);
      out(i, j) = d.dk(v) * g * g + d.k(v) * uxx.at(i, j);
    }
  return out;
}

GridFunction tfde_residual(const GridFunction& u, const FractionalSpec& spec, const Diffusivity& d) {
  const GridFunction D = spec.kind == DerivativeKind::Caputo ? fracops::caputo_left_derivative(u, spec.alpha)
                                                             : fracops::rl_left_derivative(u, spec.alpha);
  return D.densified() - diffusion_term(u, d);
}

GridFunction tfde_residual(const GridFunction& u, const TFDEProblem& problem) {
  return tfde_residual(u, problem.spec, problem.diffusivity);
}

void write_grid_csv(std::ostream& os, const GridFunction& u) {
  const auto& xg = u.space_grid();
  const auto& tg = u.time_grid();
  os << std::setprecision(17) << "t\\x";
  for (int j = 0; j < xg.nodes(); ++j) os << ',' << xg.x(j);
  os << '\n';
  for (int i = 0; i < tg.nodes(); ++i) {
    os << tg.t(i);
    for (int j = 0; j < xg.nodes(); ++j) os << ',' << u.at(i, j);
    os << '\n';
  }
}

void write_grid_csv(const std::string& path, const GridFunction& u) {
  std::ofstream f(path);
  if (!f) throw ValidationError("out: cannot open " + path);
  write_grid_csv(f, u);
}

namespace {

std::vector<double> split_doubles(const std::string& line, std::size_t skip, int lineno) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  std::size_t col = 0;
  while (std::getline(ss, cell, ',')) {
    if (col++ < skip) continue;
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(cell, &pos));
    } catch (const std::exception&) {
      if (cell == "nan" || cell == "-nan") {
        v.push_back(std::nan(""));
        continue;
      }
      throw ValidationError("csv line " + std::to_string(lineno) + ": bad number '" + cell + "'");
    }
  }
  return v;
}

}  // namespace

GridFunction read_grid_csv(std::istream& is) {
  std::string line;
  int lineno = 0;
  std::vector<double> xs;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (xs.empty()) {
      xs = split_doubles(line, 1, lineno);
      continue;
    }
    rows.push_back(split_doubles(line, 0, lineno));
    if (rows.back().size() != xs.size() + 1)
      throw ValidationError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(xs.size() + 1) +
                            " cells");
  }
  if (xs.size() < 3 || rows.size() < 3) throw ValidationError("csv: grid too small");
  const TimeGrid tg = TimeGrid::make(rows.back()[0], static_cast<int>(rows.size()) - 1);
  const SpaceGrid xg = SpaceGrid::make(xs.front(), xs.back(), static_cast<int>(xs.size()) - 1);
  GridFunction u(tg, xg);
  for (int i = 0; i < tg.nodes(); ++i)
    for (int j = 0; j < xg.nodes(); ++j) u(i, j) = rows[i][j + 1];
  return u;
}

}  // namespace fcl
