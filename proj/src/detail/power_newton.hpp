#pragma once

#include <vector>

#include "ortholab/types.hpp"

namespace ortholab::detail {

/// Minimizes  Phi(y) = (1/p) sum_i w_i |(A y - b)_i|^p - g^T y  by damped
/// Newton with Armijo backtracking. The Hessian weights |r_i|^(p-2) are
/// floored relative to max |r| when p < 2, where they would blow up.
///
/// Stationarity is measured scale-free: with g = 0 it is
///   max_j |<f_r, A_j>|  (f_r the duality map of the residual r = A y - b),
/// otherwise  ||grad||_inf / ||g||_inf.
struct PowerProblem {
  const Matrix& a;
  const Vector& b;
  const Vector& g;  // may be all zero
  const Vector& w;
  double p;
};

struct PowerOutcome {
  Vector y;
  Vector r;
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // objective value after each accepted step
};

struct PowerSettings {
  double target = 1e-12;
  int max_iterations = 300;
  double hessian_floor = 1e-8;
  bool record_trace = false;
};

PowerOutcome minimize_power_objective(const PowerProblem& problem, Vector y0,
                                      const PowerSettings& settings);

// Attainable accuracy of power_stationarity at r in double precision.
double power_stationarity_floor(const PowerProblem& pr, const Vector& r);

double power_stationarity(const PowerProblem& problem, const Vector& r);

}  // namespace ortholab::detail
