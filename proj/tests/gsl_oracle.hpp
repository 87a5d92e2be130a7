#pragma once

// Thin wrappers over GSL quadrature used as an independent reference in tests.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <functional>
#include <stdexcept>

namespace oracle {

inline double call(double x, void* p) { return (*static_cast<std::function<double(double)>*>(p))(x); }

struct Workspace {
  gsl_integration_workspace* w;
  Workspace() : w(gsl_integration_workspace_alloc(2000)) { gsl_set_error_handler_off(); }
  ~Workspace() { gsl_integration_workspace_free(w); }
};

/// int_a^b f
inline double integrate(std::function<double(double)> f, double a, double b, double tol = 1e-12) {
  Workspace ws;
  gsl_function F{&call, &f};
  double r = 0, err = 0;
  gsl_integration_qags(&F, a, b, 0.0, tol, 2000, ws.w, &r, &err);
  return r;
}

/// int_a^b f(x) (x-a)^al (b-x)^be
inline double integrate_singular(std::function<double(double)> f, double a, double b, double al, double be,
                                 double tol = 1e-12) {
  Workspace ws;
  gsl_integration_qaws_table* t = gsl_integration_qaws_table_alloc(al, be, 0, 0);
  gsl_function F{&call, &f};
  double r = 0, err = 0;
  gsl_integration_qaws(&F, a, b, t, 0.0, tol, 2000, ws.w, &r, &err);
  gsl_integration_qaws_table_free(t);
  return r;
}

}  // namespace oracle
