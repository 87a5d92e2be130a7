#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fcl/fracops.hpp"
#include "fcl/grid.hpp"
#include "fcl/tfde.hpp"

namespace fcl {

enum class SymmetryId { X1, X2, X3_lin, Xinf, X3_pow, X3_exp, X4_pow43, X4_rl };

std::string to_string(SymmetryId id);
/// Parses the stable CLI id ("X1", "X3_pow", ...); throws ValidationError.
SymmetryId parse_symmetry_id(const std::string& s);

/// One term of a characteristic: xf(x) * t^tpow * source.
struct CharacteristicPiece {
  enum class Source { U, Ut, Ux, One, H };
  Source source = Source::U;
  int tpow = 0;
  std::function<double(double)> xf;
};

/// Point symmetry xi0 d/dt + xi1 d/dx + eta d/du.
///
/// X1 and X2 are stored with the overall sign that makes
/// W = eta - xi0 u_t - xi1 u_x equal u_x and 2t u_t + alpha x u_x.
struct Symmetry {
  SymmetryId id = SymmetryId::X1;
  std::function<double(double, double, double)> xi0, xi1, eta;  // (t, x, u); eta unused for Xinf
  bool xi0_zero = true;
  bool xi1_zero = true;
  std::vector<CharacteristicPiece> form;  // W, term-preserving
  std::optional<GridFunction> h;          // Xinf only
  bool conditional = false;               // X4_rl offered under Caputo
  std::string describe;

  std::string name() const { return to_string(id); }
};

struct SymmetryOptions {
  /// Offer X4_rl under the Caputo kind (needs u_t(0,x) = 0 data).
  bool allow_conditional = false;
};

/// Generators admitted by D^alpha u = (k(u) u_x)_x.
std::vector<Symmetry> list_symmetries(DerivativeKind kind, double alpha, const Diffusivity& d,
                                      const SymmetryOptions& opt = {});
/// Looks up one admitted generator; throws ValidationError if it is not admitted.
Symmetry find_symmetry(SymmetryId id, DerivativeKind kind, double alpha, const Diffusivity& d,
                       const SymmetryOptions& opt = {});
/// Xinf with its linear-equation solution h.
Symmetry with_h(Symmetry s, GridFunction h);

/// W = eta - xi0 u_t - xi1 u_x. Power terms of u are carried through.
GridFunction characteristic(const Symmetry& s, const GridFunction& u);
/// Same quantity from the pointwise coefficients on densified data (reference path).
GridFunction characteristic_pointwise(const Symmetry& s, const GridFunction& u);

enum class AdjointRegime { RL_sub, RL_wave, Caputo_sub, Caputo_wave, Linear_particular };

std::string to_string(AdjointRegime r);
AdjointRegime parse_adjoint_regime(const std::string& s);
/// Regime of the nonlinear substitutions for a given spec.
AdjointRegime default_regime(const FractionalSpec& spec);

/// v(t,x) making the adjoint equation hold.
struct AdjointSubstitution {
  AdjointRegime regime = AdjointRegime::RL_sub;
  FractionalSpec spec;
  std::array<double, 4> c{};

  double operator()(double t, double x) const;
  /// Field with (T-t) and t^{alpha-1} factors carried as power terms.
  GridFunction field(const TimeGrid& tg, const SpaceGrid& xg) const;
  std::string describe() const;
};

/// Throws ValidationError when the regime does not match the spec or every constant is zero.
AdjointSubstitution adjoint_substitution(AdjointRegime regime, const FractionalSpec& spec, std::array<double, 4> c);

/// (D^alpha)^* v - k(u) v_xx; the adjoint of a left RL derivative is the right
/// Caputo one and vice versa.
GridFunction adjoint_residual(const GridFunction& v, const GridFunction& u, const Diffusivity& d,
                              const FractionalSpec& spec);

}  // namespace fcl
