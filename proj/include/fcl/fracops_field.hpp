#pragma once

#include <functional>

#include "fcl/fracops.hpp"
#include "fcl/grid.hpp"

// Column-wise versions of the time-series operators for space-time fields.
// Columns are independent; Exec::Parallel distributes them with OpenMP and
// Exec::Serial is the reference path used by tests and benchmarks.
namespace fcl::fracops {

enum class Exec { Serial, Parallel };

GridFunction map_columns(const GridFunction& u, const std::function<TimeSeries(const TimeSeries&)>& op,
                         Exec exec = Exec::Parallel);
GridFunction map_columns2(const GridFunction& u, const GridFunction& v,
                          const std::function<TimeSeries(const TimeSeries&, const TimeSeries&)>& op,
                          Exec exec = Exec::Parallel);

GridFunction left_frac_integral(const GridFunction& u, double mu, Exec exec = Exec::Parallel);
GridFunction right_frac_integral(const GridFunction& u, double mu, Exec exec = Exec::Parallel);
GridFunction rl_left_derivative(const GridFunction& u, double alpha, Exec exec = Exec::Parallel,
                                Scheme scheme = Scheme::ProductIntegration);
GridFunction caputo_left_derivative(const GridFunction& u, double alpha, Exec exec = Exec::Parallel);
GridFunction rl_right_derivative(const GridFunction& u, double alpha, Exec exec = Exec::Parallel,
                                 Scheme scheme = Scheme::ProductIntegration);
GridFunction caputo_right_derivative(const GridFunction& u, double alpha, Exec exec = Exec::Parallel);
GridFunction left_rl_order(const GridFunction& u, double order, Exec exec = Exec::Parallel);
GridFunction right_rl_order(const GridFunction& u, double order, Exec exec = Exec::Parallel);
GridFunction j_integral(const GridFunction& f, const GridFunction& g, double alpha, Exec exec = Exec::Parallel);

/// Applies a prepared weighted integral to every column. Left-term exponents
/// of `u` are added to the prepared set automatically when `omega` is given.
GridFunction weighted_left_integral(const GridFunction& u, double mu, const WeightedLeftIntegral::Kernel& omega,
                                    bool singular_at_T, Exec exec = Exec::Parallel);
GridFunction f_modified_integral(const GridFunction& u, double alpha, Exec exec = Exec::Parallel);

}  // namespace fcl::fracops
