#pragma once

#include <functional>

#include "ortholab/types.hpp"

namespace ortholab::detail {

struct SimplexSettings {
  double initial_step = 0.4;
  double x_tol = 1e-6;  // simplex diameter (max norm)
  double f_tol = 1e-10;  // spread of vertex values
  int max_evaluations = 1000;
};

struct SimplexOutcome {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  bool finished = false;  // stopped by tolerance rather than by the budget
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2)
// minimizing f from the axis-aligned simplex around x0.
SimplexOutcome nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                           const SimplexSettings& settings);

}  // namespace ortholab::detail
