#pragma once

#include "qrange/qcore.hpp"

#include <functional>

namespace qrange {

struct NelderMeadOptions {
  long max_iterations = 2000;
  double initial_step = 0.5;
  double tolerance = 1e-12;  // stop once the simplex's value spread falls below this
};

struct NelderMeadResult {
  RealVector x;
  double value = 0.0;
  long iterations = 0;
  long evaluations = 0;
};

/// Derivative-free minimization with the standard reflection, expansion,
/// contraction and shrink coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead_minimize(const std::function<double(const RealVector&)>& f, RealVector x0,
                                      const NelderMeadOptions& options = {});

}  // namespace qrange
