#include "fcl/fracops_field.hpp"

#include <exception>
#include <vector>

#include "fcl/errors.hpp"

namespace fcl::fracops {

namespace {

template <class Body>
void for_columns(int nx, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    for (int j = 0; j < nx; ++j) body(j);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nx; ++j) {
    try {
      body(j);
    } catch (...) {
#pragma omp critical(fcl_column_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> left_exponents(const GridFunction& u) {
  std::vector<double> ex;
  for (const auto& t : u.terms())
    if (t.anchor == Anchor::Left) ex.push_back(t.exponent);
  return ex;
}

}  // namespace

GridFunction map_columns(const GridFunction& u, const std::function<TimeSeries(const TimeSeries&)>& op, Exec exec) {
  std::vector<TimeSeries> cols(u.nx());
  for_columns(u.nx(), exec, [&](int j) { cols[j] = op(u.column(j)); });
  return GridFunction::from_columns(u.time_grid(), u.space_grid(), cols);
}

GridFunction map_columns2(const GridFunction& u, const GridFunction& v,
                          const std::function<TimeSeries(const TimeSeries&, const TimeSeries&)>& op, Exec exec) {
  require_same_grid(u, v, "map_columns2");
  std::vector<TimeSeries> cols(u.nx());
  for_columns(u.nx(), exec, [&](int j) { cols[j] = op(u.column(j), v.column(j)); });
  return GridFunction::from_columns(u.time_grid(), u.space_grid(), cols);
}

GridFunction left_frac_integral(const GridFunction& u, double mu, Exec exec) {
  return map_columns(u, [mu](const TimeSeries& f) { return left_frac_integral(f, mu); }, exec);
}

GridFunction right_frac_integral(const GridFunction& u, double mu, Exec exec) {
  return map_columns(u, [mu](const TimeSeries& f) { return right_frac_integral(f, mu); }, exec);
}

GridFunction rl_left_derivative(const GridFunction& u, double alpha, Exec exec, Scheme scheme) {
  return map_columns(u, [=](const TimeSeries& f) { return rl_left_derivative(f, alpha, scheme); }, exec);
}

GridFunction caputo_left_derivative(const GridFunction& u, double alpha, Exec exec) {
  return map_columns(u, [=](const TimeSeries& f) { return caputo_left_derivative(f, alpha); }, exec);
}

GridFunction rl_right_derivative(const GridFunction& u, double alpha, Exec exec, Scheme scheme) {
  return map_columns(u, [=](const TimeSeries& f) { return rl_right_derivative(f, alpha, scheme); }, exec);
}

GridFunction caputo_right_derivative(const GridFunction& u, double alpha, Exec exec) {
  return map_columns(u, [=](const TimeSeries& f) { return caputo_right_derivative(f, alpha); }, exec);
}

GridFunction left_rl_order(const GridFunction& u, double order, Exec exec) {
  return map_columns(u, [=](const TimeSeries& f) { return left_rl_order(f, order); }, exec);
}

GridFunction right_rl_order(const GridFunction& u, double order, Exec exec) {
  return map_columns(u, [=](const TimeSeries& f) { return right_rl_order(f, order); }, exec);
}

GridFunction j_integral(const GridFunction& f, const GridFunction& g, double alpha, Exec exec) {
  return map_columns2(f, g, [=](const TimeSeries& a, const TimeSeries& b) { return j_integral(a, b, alpha); }, exec);
}

GridFunction weighted_left_integral(const GridFunction& u, double mu, const WeightedLeftIntegral::Kernel& omega,
                                    bool singular_at_T, Exec exec) {
  const WeightedLeftIntegral op(u.time_grid(), mu, omega, left_exponents(u), singular_at_T);
  return map_columns(u, [&op](const TimeSeries& f) { return op.apply(f); }, exec);
}

GridFunction f_modified_integral(const GridFunction& u, double alpha, Exec exec) {
  const WeightedLeftIntegral op = make_f_modified_integral(u.time_grid(), alpha, left_exponents(u));
  return map_columns(u, [&op](const TimeSeries& f) { return op.apply(f); }, exec);
}

}  // namespace fcl::fracops
