#pragma once

#include <limits>
#include <string>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/weights.hpp"

namespace bergman {

inline constexpr double kPInf = std::numeric_limits<double>::infinity();

// M_p(r, f) from L equally spaced samples (L a power of two >= 4 degree).
// Unless |f|^p is a trigonometric polynomial (even p) the sample count is
// doubled until the trapezoid sums settle, up to 2^16.
// p = kPInf gives the maximum, refined around the best samples. r = 1 is
// allowed for polynomials.
double hardy_mean(const AnalyticFunction& f, double r, double p, std::size_t angular);

// Smallest admissible resolution for f.
std::size_t default_angular(const AnalyticFunction& f);

// ||f||_{A^p_w} by adaptive radial quadrature of M_p^p(r, f) w(r) 2r.
double bergman_norm(const RadialWeight& w, const AnalyticFunction& f, double p, std::size_t angular = 0,
                    double tol = 1e-10);

struct LpRow {
  std::size_t index = 0;
  double lhs = 0.0;  // ||f||^p
  double rhs = 0.0;  // int |f^(k)|^p (1-|z|)^(kp) w dA + sum_{j<k} |f^(j)(0)|^p
  double ratio = 0.0;
};

struct LpReport {
  std::vector<LpRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double band = 0.0;  // max / min
};

LpReport lp_ratio(const RadialWeight& w, double p, int k, const std::vector<AnalyticFunction>& family,
                  std::size_t angular = 0, double tol = 1e-10);

// ||f^(k)||_{A^p_{w_[kp]}} + sum_{j<=k} |f^(j)(0)|
double dirichlet_norm(const RadialWeight& w, double p, int k, const AnalyticFunction& f, std::size_t angular = 0,
                      double tol = 1e-10);

// z^n for n in [lo, hi].
std::vector<AnalyticFunction> monomial_family(int lo, int hi);
// "monomials:LO..HI"
std::vector<AnalyticFunction> parse_family(const std::string& spec);

}  // namespace bergman
