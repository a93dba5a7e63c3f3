#pragma once

#include <functional>
#include <vector>

namespace bergman {

struct LogIntegral {
  double log_value;  // log of the integral
  double rel_error;  // estimated relative error
  int panels;
};

struct LogIntegrateOptions {
  double tol = 1e-10;
  int max_panels = 40000;
  bool throw_on_failure = true;
};

// Integral of exp(log_f) over [a, b] for a nonnegative integrand given through
// its logarithm (-inf where it vanishes). `breaks` are extra split points; the
// initial panels are further cut into pieces no wider than `max_width`.
// Adaptive Gauss-Kronrod 15 with a global error queue. Each panel carries its
// own scale, so integrands spanning hundreds of orders of magnitude are fine.
LogIntegral log_integrate(const std::function<double(double)>& log_f, double a, double b,
                          const std::vector<double>& breaks, double max_width,
                          const LogIntegrateOptions& opt = {});

// Same integrand over [a, inf): panels of doubling width are appended until the
// integrand has decayed far below the accumulated total or `hard_limit` is hit.
LogIntegral log_integrate_to_inf(const std::function<double(double)>& log_f, double a,
                                 const std::vector<double>& breaks, double hard_limit,
                                 const LogIntegrateOptions& opt = {});

// Gauss-Legendre rule of order 20 on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre_20();

}  // namespace bergman
