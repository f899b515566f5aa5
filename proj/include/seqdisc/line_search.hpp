#pragma once

#include <functional>

namespace seqdisc {

struct ScalarMaximum {
  double x;
  double value;
  int iterations;
};

struct LineSearchOptions {
  double x_tol = 1e-12;
  int max_iterations = 200;
};

/// Maximizes a unimodal f on [lo, hi] by golden-section search with parabolic
/// interpolation steps (Brent). When the derivative is supplied the result is
/// polished by bisection on its sign change, which locates the stationary
/// point well below the sqrt(eps) floor of value-only comparisons.
ScalarMaximum maximize_unimodal(const std::function<double(double)>& f, double lo, double hi,
                                const std::function<double(double)>& derivative = {},
                                LineSearchOptions options = {});

/// Root of a continuous g with g(lo) and g(hi) of opposite sign, by bisection.
double bisect_root(const std::function<double(double)>& g, double lo, double hi, double x_tol,
                   int max_iterations = 200);

}  // namespace seqdisc
