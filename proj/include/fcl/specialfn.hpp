#pragma once

#include <utility>

namespace fcl::specialfn {

/// Truncation control for power-series evaluations.
struct SeriesControl {
  int max_terms = 500;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;

  /// Throws DomainError unless max_terms >= 1 and some tolerance is positive.
  void validate() const;
};

/// Gamma function (Lanczos, reflection below 0.5). Throws DomainError at poles.
double gamma(double z);

/// 1/Gamma(z), equal to 0 at the poles.
double rgamma(double z);

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.
double mittag_leffler(double alpha, double beta, double z, const SeriesControl& ctl = {});

/// Gauss hypergeometric 2F1(a,b;c;z) for 0 <= z < 1; z = 1 is accepted when c-a-b > 0.
double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

/// Kernel Phi(t) of the Caputo subdiffusion catalog, alpha in (0,1).
double phi_sub(double t, double alpha, double T);

/// Kernels (Phi(t), Psi(t)) of the Caputo diffusion-wave catalog, alpha in (1,2).
std::pair<double, double> phi_psi_wave(double t, double alpha, double T);

}  // namespace fcl::specialfn
