#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcl/fracops_field.hpp"
#include "fcl/symcat.hpp"
#include "fcl/tfde.hpp"

namespace fcl {

/// Data a conserved vector is evaluated on.
struct VectorInputs {
  VectorInputs() = default;
  VectorInputs(GridFunction u_, FractionalSpec spec_, Diffusivity d)
      : u(std::move(u_)), spec(spec_), diffusivity(d) {}

  GridFunction u;
  FractionalSpec spec;
  Diffusivity diffusivity;
  std::optional<GridFunction> v;     // substitution field (linear catalog, Noether vectors)
  std::optional<GridFunction> h;     // linear-equation solution for the Xinf vectors
  std::function<double(double)> u0;  // u(0,x); the first grid row when empty
  std::function<double(double)> u1;  // u_t(0,x); needed by the Phi/Psi vectors
  fracops::Exec exec = fracops::Exec::Parallel;
};

struct ConservedVector {
  std::string id;
  GridFunction Ct, Cx;
};

/// Named recipe producing (C^t, C^x) from VectorInputs.
struct ConservedVectorEval {
  std::string provenance;
  std::string description;
  bool singular_at_T = false;  // contains (T-t)^p weights with p < 0, or takes a Caputo-side substitution
  bool needs_substitution = false;
  std::function<ConservedVector(const VectorInputs&)> eval;

  ConservedVector operator()(const VectorInputs& in) const { return eval(in); }
};

// -- Noether construction ------------------------------------------------------

/// v [D^alpha u - k'(u) u_x^2 - k(u) u_xx].
GridFunction formal_lagrangian(const GridFunction& u, const GridFunction& v, const Diffusivity& d,
                               const FractionalSpec& spec);
GridFunction noether_t(const Symmetry& s, const GridFunction& u, const GridFunction& v, const Diffusivity& d,
                       const FractionalSpec& spec, fracops::Exec exec = fracops::Exec::Parallel);
GridFunction noether_x(const Symmetry& s, const GridFunction& u, const GridFunction& v, const Diffusivity& d,
                       const FractionalSpec& spec);
/// Vector obtained from a generator and a substitution; the substitution field
/// is built from `sub` on the grid of u.
ConservedVectorEval noether_vector(const Symmetry& s, const AdjointSubstitution& sub);
/// Stable id of a Noether-derived vector, e.g. "Noether:X2:Caputo_sub:1;0;0;0".
std::string noether_id(SymmetryId s, const AdjointSubstitution& sub);

// -- closed-form catalog -------------------------------------------------------

std::vector<std::string> catalog_ids();
bool catalog_admissible(const std::string& id, const FractionalSpec& spec, const Diffusivity& d);
/// Throws ValidationError for unknown or inadmissible ids.
ConservedVectorEval catalog_vector(const std::string& id, const FractionalSpec& spec, const Diffusivity& d);

// -- symmetry/vector correspondence --------------------------------------------

struct Correspondence {
  enum class Kind { Vectors, Zero, NotListed };
  Kind kind = Kind::NotListed;
  std::vector<std::string> ids;  // catalog ids when kind == Vectors
};

/// Table entry for (generator, constant index 1..4) in the nonlinear regime.
/// `conditional` selects the X4_rl remark for the Caputo diffusion-wave case.
Correspondence correspondence(SymmetryId s, int constant, AdjointRegime regime, bool conditional = false);
/// Generators listed as columns of the regime's table.
std::vector<SymmetryId> correspondence_columns(AdjointRegime regime, bool conditional = false);

// -- verification --------------------------------------------------------------

struct VerifyWindow {
  double initial_layer = 0.05;  // fraction of nodes skipped after t = 0 (t = 0 itself always is)
  double end_exclusion = 0.05;  // fraction of nodes dropped before T when the vector is singular there
  bool singular_at_T = false;
};

struct ResidualReport {
  std::string provenance;
  DerivativeKind kind = DerivativeKind::Caputo;
  double alpha = 0.0;
  int n_steps = 0;
  int n_x = 0;
  int rows = 0, cols = 0;          // residual layout (time rows, space columns)
  std::vector<double> residual;    // NaN outside the window
  std::vector<unsigned char> excluded;
  int i_lo = 0, i_hi = 0;
  double Linf = 0.0;
  double L2 = 0.0;
  int excluded_nodes = 0;
  std::optional<double> convergence_ratio;
};

/// D_t C^t + D_x C^x with central differences on the interior window.
ResidualReport divergence_residual(const ConservedVector& cv, const VerifyWindow& w);
/// d/dt int C^t dx + C^x(x_hi) - C^x(x_lo) (trapezoid in x, central in t).
ResidualReport flux_balance(const ConservedVector& cv, const VerifyWindow& w);
/// Sets fine.convergence_ratio = coarse.Linf / fine.Linf when the grids are nested.
void attach_ratio(ResidualReport& fine, const ResidualReport& coarse);

/// CSV with columns provenance_id,kind,alpha,n_steps,n_x,Linf,L2,excluded_nodes,convergence_ratio.
void write_report_csv(std::ostream& os, const std::vector<ResidualReport>& rows, const std::string& comment = "");

}  // namespace fcl
