#include <algorithm>
#include <cmath>
#include <limits>

#include "fcl/conslaw.hpp"
#include "fcl/errors.hpp"

namespace fcl {

namespace {

void set_window(ResidualReport& r, const TimeGrid& tg, const VerifyWindow& w) {
  const int N = tg.n_steps;
  r.i_lo = std::max(1, static_cast<int>(std::ceil(w.initial_layer * N - 1e-9)));
  r.i_hi = N - 1;
  if (w.singular_at_T) r.i_hi -= static_cast<int>(std::ceil(w.end_exclusion * N - 1e-9));
  if (r.i_hi < r.i_lo) throw InsufficientGridError("verify: exclusion window leaves no time nodes");
  r.excluded_nodes = (N + 1) - (r.i_hi - r.i_lo + 1);
}

void finish_norms(ResidualReport& r, double cell) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double inf = 0.0, sq = 0.0;
  bool bad = false;
  for (std::size_t k = 0; k < r.residual.size(); ++k) {
    if (r.excluded[k]) continue;
    const double v = r.residual[k];
    if (!std::isfinite(v)) bad = true;
    inf = std::max(inf, std::fabs(v));
    sq += v * v;
  }
  r.Linf = bad ? nan : inf;
  r.L2 = bad ? nan : std::sqrt(cell * sq);
}

}  // namespace

ResidualReport divergence_residual(const ConservedVector& cv, const VerifyWindow& w) {
  require_same_grid(cv.Ct, cv.Cx, "divergence_residual");
  const GridFunction R = dt(cv.Ct) + dx(cv.Cx);
  const auto& tg = R.time_grid();
  const auto& xg = R.space_grid();
  ResidualReport r;
  r.provenance = cv.id;
  r.n_steps = tg.n_steps;
  r.n_x = xg.n_x;
  r.rows = R.nt();
  r.cols = R.nx();
  set_window(r, tg, w);
  const std::size_t size = static_cast<std::size_t>(r.rows) * r.cols;
  r.residual.assign(size, std::numeric_limits<double>::quiet_NaN());
  r.excluded.assign(size, 1);
  for (int i = r.i_lo; i <= r.i_hi; ++i)
    for (int j = 1; j + 1 < r.cols; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * r.cols + j;
      r.residual[k] = R.at(i, j);
      r.excluded[k] = 0;
    }
  finish_norms(r, tg.h() * xg.dx());
  return r;
}

ResidualReport flux_balance(const ConservedVector& cv, const VerifyWindow& w) {
  require_same_grid(cv.Ct, cv.Cx, "flux_balance");
  const auto& tg = cv.Ct.time_grid();
  const auto& xg = cv.Ct.space_grid();
  const int nt = cv.Ct.nt(), nx = cv.Ct.nx();
  std::vector<double> mass(nt, 0.0);
  for (int i = 0; i < nt; ++i) {
    double s = 0.5 * (cv.Ct.at(i, 0) + cv.Ct.at(i, nx - 1));
    for (int j = 1; j + 1 < nx; ++j) s += cv.Ct.at(i, j);
    mass[i] = s * xg.dx();
  }
  ResidualReport r;
  r.provenance = cv.id + "|flux";
  r.n_steps = tg.n_steps;
  r.n_x = xg.n_x;
  r.rows = nt;
  r.cols = 1;
  set_window(r, tg, w);
  r.residual.assign(nt, std::numeric_limits<double>::quiet_NaN());
  r.excluded.assign(nt, 1);
  const double h = tg.h();
  for (int i = r.i_lo; i <= r.i_hi; ++i) {
    r.residual[i] = (mass[i + 1] - mass[i - 1]) / (2.0 * h) + cv.Cx.at(i, nx - 1) - cv.Cx.at(i, 0);
    r.excluded[i] = 0;
  }
  finish_norms(r, h);
  return r;
}

void attach_ratio(ResidualReport& fine, const ResidualReport& coarse) {
  if (fine.n_steps != 2 * coarse.n_steps) return;
  if (fine.Linf > 0.0) fine.convergence_ratio = coarse.Linf / fine.Linf;
  else if (coarse.Linf > 0.0) fine.convergence_ratio = std::numeric_limits<double>::infinity();
}

}  // namespace fcl
