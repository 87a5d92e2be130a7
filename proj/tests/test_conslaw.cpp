#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fcl/conslaw.hpp"
#include "fcl/errors.hpp"
#include "fcl/specialfn.hpp"

using namespace fcl;

namespace {

using K = DerivativeKind;

double max_diff(const GridFunction& a, const GridFunction& b, int i_lo, int i_hi) {
  double m = 0.0;
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = 1; j + 1 < a.nx(); ++j) m = std::max(m, std::fabs(a.at(i, j) - b.at(i, j)));
  return m;
}

struct Linear {
  FractionalSpec spec;
  TimeGrid tg;
  SpaceGrid xg;
  GridFunction u;
};

Linear linear_case(K kind, double alpha, int N) {
  Linear c{FractionalSpec::make(kind, alpha, 1.0), TimeGrid::make(1.0, N), SpaceGrid::make(0.0, M_PI, N), {}};
  c.u = exact_linear_separable(c.spec, 1.0, c.tg, c.xg);
  return c;
}

// Linf of the divergence for the given vector on grids N, 2N, 4N.
std::vector<double> refine(const std::function<ConservedVector(int)>& make, bool singular_at_T, int N0 = 64) {
  std::vector<double> out;
  for (int N = N0; N <= 4 * N0; N *= 2) {
    VerifyWindow w;
    w.singular_at_T = singular_at_T;
    out.push_back(divergence_residual(make(N), w).Linf);
  }
  return out;
}

}  // namespace

TEST_CASE("Noether operators reproduce the linear closed forms") {
  const Diffusivity d = Diffusivity::constant();
  for (auto kind : {K::Caputo, K::RiemannLiouville}) {
    const Linear c = linear_case(kind, 0.5, 256);
    // v = t x for Caputo; the RL particular solution is singular at t = 0, so
    // the RL side uses the regular adjoint solutions instead
    const auto sub = kind == K::Caputo
                         ? adjoint_substitution(AdjointRegime::Linear_particular, c.spec, {1.0, 0.0, 0.0, 0.0})
                         : adjoint_substitution(AdjointRegime::RL_sub, c.spec, {0.5, 1.0, 0.0, 0.0});
    const GridFunction v = sub.field(c.tg, c.xg);
    const GridFunction L = formal_lagrangian(c.u, v, d, c.spec);
    const std::string prefix = kind == K::Caputo ? "Linear_Cap_sub_" : "Linear_RL_sub_";
    for (auto [sid, name] : {std::pair{SymmetryId::X1, "X1"}, std::pair{SymmetryId::X3_lin, "X3"}}) {
      const Symmetry s = find_symmetry(sid, kind, 0.5, d);
      VectorInputs in{c.u, c.spec, d};
      in.v = v;
      const ConservedVector cat = catalog_vector(prefix + name, c.spec, d)(in);
      const GridFunction nt = noether_t(s, c.u, v, d, c.spec);
      // the closed forms drop the xi L terms, which vanish on solutions
      const GridFunction nx =
          noether_x(s, c.u, v, d, c.spec) - map_txu(L, [&](double t, double x, double l) { return s.xi1(t, x, 0.0) * l; });
      CHECK(max_diff(nt, cat.Ct, 1, 255) <= 1e-6);
      CHECK(max_diff(nx, cat.Cx, 1, 255) <= 1e-6);
    }
  }
}

TEST_CASE("spec examples of the catalog") {
  const Diffusivity d = Diffusivity::constant();
  SUBCASE("trivial RL vector on the power mode") {
    const auto spec = FractionalSpec::make(K::RiemannLiouville, 0.5, 1.0);
    const auto tg = TimeGrid::make(1.0, 256);
    const auto xg = SpaceGrid::make(0.0, 1.0, 16);
    const GridFunction u = exact_rl_power_mode(0.5, 2.0, tg, xg);
    const ConservedVector cv = catalog_vector("Trivial_RL", spec, d)({u, spec, d});
    for (int i = 26; i <= 256; ++i)
      for (int j = 0; j <= 16; ++j) {
        CHECK(cv.Ct.at(i, j) == doctest::Approx(2.0 * std::tgamma(0.5)).epsilon(1e-10));
        CHECK(std::fabs(cv.Cx.at(i, j)) <= 1e-12);
      }
    VerifyWindow w;
    w.initial_layer = 0.1;
    CHECK(divergence_residual(cv, w).Linf <= 1e-8);
    CHECK(flux_balance(cv, w).Linf <= 1e-8);
  }
  SUBCASE("Table 3 vector 1 on a stationary solution") {
    const auto spec = FractionalSpec::make(K::Caputo, 0.5, 1.0);
    const Diffusivity kp = Diffusivity::power(1.0);
    const auto tg = TimeGrid::make(1.0, 128);
    const auto xg = SpaceGrid::make(0.0, 1.0, 32);
    const double a = 0.5, b = 1.0;
    const GridFunction u = exact_stationary_caputo(kp, a, b, tg, xg);
    const ConservedVector cv = catalog_vector("Table3_v1", spec, kp)({u, spec, kp});
    for (int i = 0; i < 128; i += 7)
      for (int j = 0; j <= 32; j += 4) CHECK(cv.Cx.at(i, j) == doctest::Approx(-std::pow(1.0 - tg.t(i), -0.5) * a));
  }
}

TEST_CASE("every catalog vector vanishes on the zero solution") {
  const auto tg = TimeGrid::make(1.0, 32);
  const auto xg = SpaceGrid::make(0.0, 1.0, 16);
  const GridFunction zero(tg, xg);
  // negative powers are undefined at u = 0
  const std::vector<Diffusivity> ds{Diffusivity::constant(), Diffusivity::power(2.0), Diffusivity::exponential()};
  int checked = 0;
  for (double alpha : {0.5, 1.5})
    for (auto kind : {K::Caputo, K::RiemannLiouville})
      for (const auto& d : ds) {
        const auto spec = FractionalSpec::make(kind, alpha, 1.0);
        for (const auto& id : catalog_ids()) {
          if (!catalog_admissible(id, spec, d)) continue;
          VectorInputs in{zero, spec, d};
          in.v = GridFunction::sample(tg, xg, [](double t, double x) { return t * x + 1.0; });
          in.h = zero;  // Xinf uses W = h, which does not depend on u
          in.u1 = [](double) { return 0.0; };
          const auto cv = catalog_vector(id, spec, d);
          const ConservedVector c = cv(in);
          VerifyWindow w;
          w.singular_at_T = cv.singular_at_T;
          const auto r = divergence_residual(c, w);
          CHECK_MESSAGE(r.Linf == 0.0, id);
          ++checked;
        }
      }
  CHECK(checked > 40);
}

TEST_CASE("catalog rejects unknown and inadmissible ids") {
  const auto spec = FractionalSpec::make(K::Caputo, 0.5, 1.0);
  CHECK_THROWS_AS(catalog_vector("Table7_v1", spec, Diffusivity::constant()), ValidationError);
  CHECK_THROWS_AS(catalog_vector("Table1_v1", spec, Diffusivity::constant()), ValidationError);
  CHECK_THROWS_AS(catalog_vector("Linear_Cap_sub_X1", spec, Diffusivity::power(2.0)), ValidationError);
  const auto rl = FractionalSpec::make(K::RiemannLiouville, 0.5, 1.0);
  CHECK(catalog_admissible("NL_RL_sub_t1", rl, Diffusivity::power(2.0)));
  CHECK_FALSE(catalog_admissible("NL_RL_sub_t1", rl, Diffusivity::power(3.0)));
  // linear vectors need the substitution field
  const auto tg = TimeGrid::make(1.0, 16);
  const auto xg = SpaceGrid::make(0.0, 1.0, 8);
  const GridFunction u(tg, xg);
  CHECK_THROWS_AS(catalog_vector("Linear_Cap_sub_X1", spec, Diffusivity::constant())({u, spec, Diffusivity::constant()}),
                  ValidationError);
}

TEST_CASE("Noether vectors are linear in the substitution constants") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> C(-2.0, 2.0);
  const Diffusivity d = Diffusivity::power(2.0);
  for (auto [kind, alpha, regime] : {std::tuple{K::Caputo, 0.5, AdjointRegime::Caputo_sub},
                                     std::tuple{K::RiemannLiouville, 1.5, AdjointRegime::RL_wave},
                                     std::tuple{K::Caputo, 1.5, AdjointRegime::Caputo_wave}}) {
    const auto spec = FractionalSpec::make(kind, alpha, 1.0);
    const auto tg = TimeGrid::make(1.0, 64);
    const auto xg = SpaceGrid::make(0.0, 1.0, 16);
    const GridFunction u =
        GridFunction::sample(tg, xg, [](double t, double x) { return 1.0 + 0.3 * t * std::cos(x) + 0.1 * x * x; });
    const Symmetry s = find_symmetry(SymmetryId::X2, kind, alpha, d);
    std::array<double, 4> c1{}, c2{}, c12{};
    for (int k = 0; k < 4; ++k) {
      c1[k] = C(rng);
      c2[k] = C(rng);
      c12[k] = c1[k] + c2[k];
    }
    const VectorInputs in{u, spec, d};
    const auto v1 = noether_vector(s, adjoint_substitution(regime, spec, c1))(in);
    const auto v2 = noether_vector(s, adjoint_substitution(regime, spec, c2))(in);
    const auto v12 = noether_vector(s, adjoint_substitution(regime, spec, c12))(in);
    const int i_hi = 64 - 1 - 4;
    const double scale = std::max(1.0, max_diff(v12.Ct, GridFunction(tg, xg), 1, i_hi));
    CHECK(max_diff(v12.Ct, v1.Ct + v2.Ct, 1, i_hi) <= 1e-12 * scale);
    CHECK(max_diff(v12.Cx, v1.Cx + v2.Cx, 1, i_hi) <= 1e-12 * std::max(1.0, max_diff(v12.Cx, GridFunction(tg, xg), 1, i_hi)));
  }
}

TEST_CASE("conservation on exact linear solutions") {
  const Diffusivity d = Diffusivity::constant();
  auto linear_vector = [&](K kind, double alpha, const std::string& id, AdjointRegime regime, std::array<double, 4> c) {
    return [=](int N) {
      const Linear lc = linear_case(kind, alpha, N);
      VectorInputs in{lc.u, lc.spec, d};
      in.v = adjoint_substitution(regime, lc.spec, c).field(lc.tg, lc.xg);
      in.h = exact_linear_separable(lc.spec, 2.0, lc.tg, lc.xg);
      return catalog_vector(id, lc.spec, d)(in);
    };
  };
  struct Case {
    K kind;
    double alpha;
    std::string id;
    AdjointRegime regime;
    std::array<double, 4> c;
  };
  const std::vector<Case> cases{
      {K::Caputo, 0.5, "Trivial_Caputo", AdjointRegime::Caputo_sub, {0, 1, 0, 0}},
      {K::Caputo, 0.5, "Linear_Cap_sub_X3", AdjointRegime::Caputo_sub, {0, 1, 0, 0}},
      {K::Caputo, 0.5, "Linear_Cap_sub_X1", AdjointRegime::Caputo_sub, {0, 1, 0, 0}},
      {K::Caputo, 0.5, "Linear_Cap_sub_Xinf", AdjointRegime::Caputo_sub, {1, 1, 0, 0}},
      {K::RiemannLiouville, 0.5, "Linear_RL_sub_X3", AdjointRegime::RL_sub, {1, 1, 0, 0}},
      {K::RiemannLiouville, 0.5, "Linear_RL_sub_X1_alt", AdjointRegime::RL_sub, {1, 1, 0, 0}},
      {K::RiemannLiouville, 1.5, "Table1_v5", AdjointRegime::RL_wave, {1, 0, 0, 0}},
      {K::RiemannLiouville, 1.5, "Linear_RL_wave_X2", AdjointRegime::RL_wave, {1, 1, 1, 1}},
  };
  for (const auto& c : cases) {
    const auto cv = catalog_vector(c.id, FractionalSpec::make(c.kind, c.alpha, 1.0), d);
    const auto L = refine(linear_vector(c.kind, c.alpha, c.id, c.regime, c.c), cv.singular_at_T);
    INFO(c.id, " ", L[0], " ", L[1], " ", L[2]);
    CHECK(L[0] / L[1] >= 1.4);
    CHECK(L[1] / L[2] >= 1.4);
  }
}

TEST_CASE("stationary Caputo solutions conserve the Table 3 and Table 5 vectors") {
  const Diffusivity d = Diffusivity::power(1.0);
  for (double alpha : {0.5, 1.5}) {
    const auto spec = FractionalSpec::make(K::Caputo, alpha, 1.0);
    const auto tg = TimeGrid::make(1.0, 256);
    const auto xg = SpaceGrid::make(0.0, 1.0, 32);
    const GridFunction u = exact_stationary_caputo(d, 0.5, 1.0, tg, xg);
    const std::string prefix = alpha < 1.0 ? "Table3_v" : "Table5_v";
    for (int v = 1; v <= (alpha < 1.0 ? 4 : 6); ++v) {
      const auto cv = catalog_vector(prefix + std::to_string(v), spec, d);
      VectorInputs in{u, spec, d};
      in.u1 = [](double) { return 0.0; };
      VerifyWindow w;
      w.singular_at_T = true;
      const ConservedVector c = cv(in);
      CHECK_MESSAGE(divergence_residual(c, w).Linf <= 1e-8, cv.provenance);
      CHECK_MESSAGE(flux_balance(c, w).Linf <= 1e-8, cv.provenance);
    }
  }
}

TEST_CASE("flux balance responds linearly to an injected boundary flux") {
  const auto spec = FractionalSpec::make(K::RiemannLiouville, 0.5, 1.0);
  const auto tg = TimeGrid::make(1.0, 64);
  const auto xg = SpaceGrid::make(0.0, 1.0, 16);
  const GridFunction u = exact_rl_power_mode(0.5, 1.5, tg, xg);
  ConservedVector cv = catalog_vector("Trivial_RL", spec, Diffusivity::constant())({u, spec, Diffusivity::constant()});
  VerifyWindow w;
  const double base = flux_balance(cv, w).Linf;
  for (double eps : {1e-3, 0.25}) {
    ConservedVector bumped = cv;
    bumped.Cx = cv.Cx.densified();
    for (int i = 0; i < bumped.Cx.nt(); ++i) bumped.Cx(i, 16) += eps;
    CHECK(flux_balance(bumped, w).Linf == doctest::Approx(eps).epsilon(1e-9).scale(0.0));
    CHECK(std::fabs(flux_balance(bumped, w).Linf - eps) <= base + 1e-12);
  }
  // equal fluxes at both ends cancel
  ConservedVector both = cv;
  both.Cx = add_const(cv.Cx.densified(), 3.0);
  CHECK(flux_balance(both, w).Linf <= base + 1e-12);
}

TEST_CASE("verification window and norms") {
  const auto tg = TimeGrid::make(1.0, 40);
  const auto xg = SpaceGrid::make(0.0, 1.0, 10);
  ConservedVector cv{"lin", GridFunction::sample(tg, xg, [](double t, double x) { return t * x; }),
                     GridFunction::sample(tg, xg, [](double, double x) { return -0.5 * x * x; })};
  // D_t(tx) + D_x(-x^2/2) = 0 and both are exactly differenced
  VerifyWindow w;
  w.singular_at_T = true;
  const auto r = divergence_residual(cv, w);
  CHECK(r.i_lo == 2);
  CHECK(r.i_hi == 37);
  CHECK(r.excluded_nodes == 41 - 36);
  CHECK(r.Linf <= 1e-13);
  // a NaN inside the window is reported, not skipped
  cv.Ct(20, 5) = std::nan("");
  CHECK(std::isnan(divergence_residual(cv, w).Linf));
  ResidualReport coarse = r, fine = r;
  coarse.Linf = 4e-3;
  fine.Linf = 1e-3;
  fine.n_steps = 2 * coarse.n_steps;
  attach_ratio(fine, coarse);
  REQUIRE(fine.convergence_ratio);
  CHECK(*fine.convergence_ratio == doctest::Approx(4.0));
}

TEST_CASE("correspondence tables") {
  using S = SymmetryId;
  using R = AdjointRegime;
  using Kd = Correspondence::Kind;
  auto ids = [](S s, int c, R r, bool cond = false) { return correspondence(s, c, r, cond).ids; };
  CHECK(ids(S::X1, 2, R::RL_wave) == std::vector<std::string>{"Table1_v1"});
  CHECK(ids(S::X2, 1, R::Caputo_sub) == std::vector<std::string>{"Table3_v1", "Table3_v2"});
  CHECK(correspondence(S::X1, 1, R::Caputo_wave).kind == Kd::Zero);
  CHECK(correspondence(S::X4_pow43, 2, R::RL_wave).kind == Kd::Zero);
  CHECK(ids(S::X4_rl, 3, R::RL_wave) == std::vector<std::string>{"Table1_v5"});
  CHECK(correspondence(S::X4_rl, 1, R::Caputo_wave).kind == Kd::NotListed);
  CHECK(ids(S::X4_rl, 1, R::Caputo_wave, true) == std::vector<std::string>{"Table5_v1", "Table5_v2", "Table5_v3"});
  CHECK(ids(S::X4_rl, 2, R::RL_sub) == std::vector<std::string>{"NL_RL_sub_t2"});
  CHECK(correspondence(S::X1, 1, R::RL_sub).kind == Kd::Zero);
  CHECK(correspondence(S::X1, 3, R::Caputo_sub).kind == Kd::NotListed);
  // every referenced id exists in the catalog
  const auto all = catalog_ids();
  for (auto r : {R::RL_sub, R::RL_wave, R::Caputo_sub, R::Caputo_wave})
    for (S s : correspondence_columns(r, true))
      for (int c = 1; c <= 4; ++c)
        for (const auto& id : correspondence(s, c, r, true).ids)
          CHECK_MESSAGE(std::find(all.begin(), all.end(), id) != all.end(), id);
}

TEST_CASE("report CSV") {
  ResidualReport a;
  a.provenance = "Trivial_Caputo";
  a.kind = K::Caputo;
  a.alpha = 0.5;
  a.n_steps = 128;
  a.n_x = 128;
  a.Linf = 1.25e-3;
  a.L2 = 2e-4;
  a.excluded_nodes = 8;
  a.convergence_ratio = 1.9;
  ResidualReport b = a;
  b.provenance = "Trivial_Caputo|flux";
  b.convergence_ratio.reset();
  std::ostringstream os;
  write_report_csv(os, {a, b}, "run 1\nsecond line");
  CHECK(os.str() ==
        "# run 1\n# second line\n"
        "provenance_id,kind,alpha,n_steps,n_x,Linf,L2,excluded_nodes,convergence_ratio\n"
        "Trivial_Caputo,caputo,0.5,128,128,0.00125,0.0002,8,1.9\n"
        "Trivial_Caputo|flux,caputo,0.5,128,128,0.00125,0.0002,8,\n");
}
