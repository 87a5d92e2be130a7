#include <cmath>
#include <sstream>

#include "fcl/errors.hpp"
#include "fcl/tfde.hpp"

namespace fcl {

namespace {

bool is_int(double v) { return std::fabs(v - std::round(v)) <= 1e-12; }

// u^p for real u; integer p allows negative bases.
double ipow(double u, double p) {
  if (u < 0.0 && is_int(p)) return std::pow(u, std::round(p));
  return std::pow(u, p);
}

}  // namespace

Diffusivity Diffusivity::constant(double k0) {
  if (!(k0 > 0.0)) throw ValidationError("constant diffusivity must be positive");
  return {DiffusivityFamily::Constant, k0, 0.0};
}

Diffusivity Diffusivity::power(double beta) {
  if (beta == 0.0 || !std::isfinite(beta)) throw ValidationError("power diffusivity needs beta != 0");
  return {DiffusivityFamily::Power, 1.0, beta};
}

Diffusivity Diffusivity::exponential() { return {DiffusivityFamily::Exponential, 1.0, 0.0}; }

double Diffusivity::k(double u) const {
  switch (family) {
    case DiffusivityFamily::Constant: return k0;
    case DiffusivityFamily::Power: return ipow(u, beta);
    case DiffusivityFamily::Exponential: return std::exp(u);
  }
  return 0.0;
}

double Diffusivity::dk(double u) const {
  switch (family) {
    case DiffusivityFamily::Constant: return 0.0;
    case DiffusivityFamily::Power: return beta * ipow(u, beta - 1.0);
    case DiffusivityFamily::Exponential: return std::exp(u);
  }
  return 0.0;
}

double Diffusivity::d2k(double u) const {
  switch (family) {
    case DiffusivityFamily::Constant: return 0.0;
    case DiffusivityFamily::Power: return beta == 1.0 ? 0.0 : beta * (beta - 1.0) * ipow(u, beta - 2.0);
    case DiffusivityFamily::Exponential: return std::exp(u);
  }
  return 0.0;
}

double Diffusivity::K(double u) const {
  switch (family) {
    case DiffusivityFamily::Constant: return k0 * u;
    case DiffusivityFamily::Power:
      if (beta == -1.0) return std::log(u);
      return ipow(u, beta + 1.0) / (beta + 1.0);
    case DiffusivityFamily::Exponential: return std::exp(u);
  }
  return 0.0;
}

double Diffusivity::K_inv(double y) const {
  auto range = [&](const char* why) {
    std::ostringstream os;
    os << "K^{-1}(" << y << ") undefined for " << describe() << ": " << why;
    return RangeError(os.str());
  };
  switch (family) {
    case DiffusivityFamily::Constant: return y / k0;
    case DiffusivityFamily::Power: {
      if (beta == -1.0) return std::exp(y);
      const double p = beta + 1.0;
      const double z = y * p;
      // odd integer powers invert on the whole line
      if (is_int(p) && static_cast<long>(std::round(p)) % 2 != 0) return std::copysign(std::pow(std::fabs(z), 1.0 / p), z);
      if (!(z > 0.0)) throw range("need (beta+1) y > 0");
      return std::pow(z, 1.0 / p);
    }
    case DiffusivityFamily::Exponential:
      if (!(y > 0.0)) throw range("need y > 0");
      return std::log(y);
  }
  return 0.0;
}

std::string Diffusivity::describe() const {
  std::ostringstream os;
  switch (family) {
    case DiffusivityFamily::Constant: os << "constant(" << k0 << ")"; break;
    case DiffusivityFamily::Power: os << "power(" << beta << ")"; break;
    case DiffusivityFamily::Exponential: os << "exponential"; break;
  }
  return os.str();
}

}  // namespace fcl
