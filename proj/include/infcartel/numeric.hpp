#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace infcartel::numeric {

struct RootResult {
  double root = 0.0;
  int iterations = 0;
};

/// Bisection on [lo, hi]. The endpoints must bracket a sign change; throws
/// std::invalid_argument otherwise. Stops when the bracket is below `tol`.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-12, int max_iterations = 400);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 50);

/// Sample mean and standard error of the mean.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

Estimate estimate(std::span<const double> values);

}  // namespace infcartel::numeric
