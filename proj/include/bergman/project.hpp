#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/weights.hpp"

namespace bergman {

// Tensor rule on the disc: radial nodes with dr weights, uniform angles.
struct QuadratureSpec {
  std::vector<double> nodes;    // radii
  std::vector<double> gaps;     // 1 - radii, kept separately near the boundary
  std::vector<double> weights;  // positive, for integrals in dr
  std::size_t angular = 64;     // power of two
  double tol = kDefaultTol;

  // Gauss-Legendre 20 panels in t = -log(1-r) of width <= log 2, split at the
  // weight's breakpoints, cut off once the tail is negligible against
  // w_{2 degree + 1}. Angular resolution covers frequencies up to `degree`.
  static QuadratureSpec for_weight(const RadialWeight& w, long long degree, double tol = kDefaultTol);
};

struct ProjectOptions {
  bool fast_path = true;  // holomorphic input: use P f = f
};

// Maclaurin coefficients of P_w f, from the quadrature (no fast path).
AnalyticFunction project_coefficients(const RadialWeight& w, const AnalyticFunction& f, const QuadratureSpec& q);
AnalyticFunction project_coefficients(const RadialWeight& w, const GriddedFunction& f, const QuadratureSpec& q);

cplx project(const RadialWeight& w, const AnalyticFunction& f, cplx z, const QuadratureSpec& q,
             const ProjectOptions& opt = {});
cplx project(const RadialWeight& w, const GriddedFunction& f, cplx z, const QuadratureSpec& q);

struct PlusValue {
  double value = 0.0;
  std::vector<std::string> flags;  // "input_not_nonnegative" when f has negative or complex samples
};
PlusValue project_plus(const RadialWeight& w, const AnalyticFunction& f, cplx z, const QuadratureSpec& q);
PlusValue project_plus(const RadialWeight& w, const GriddedFunction& f, cplx z, const QuadratureSpec& q);

// w_{2m+1} / w_{2(m-n)+1}
double project_monomial(const RadialWeight& w, double m, double n, double tol = kDefaultTol);

double lp_norm(const RadialWeight& v, const AnalyticFunction& f, double p, const QuadratureSpec& q);
double lp_norm(const RadialWeight& v, const GriddedFunction& f, double p, const QuadratureSpec& q);

// <f, g> in L^2_w
cplx inner_product(const RadialWeight& w, const AnalyticFunction& f, const AnalyticFunction& g, const QuadratureSpec& q);
cplx inner_product(const RadialWeight& w, const GriddedFunction& f, const GriddedFunction& g, const QuadratureSpec& q);

struct LowerBound {
  double value = 0.0;  // max over the pairs
  std::vector<double> per_pair;
  std::size_t argmax = 0;
};
// max over (m, n) of (w_{2m+1}/w_{2(m-n)+1})^p eta_{p(m-n)+1} / v_{p(m+n)+1}
LowerBound operator_lower_bound(const RadialWeight& w, const RadialWeight& v, const RadialWeight& eta, double p,
                                const std::vector<std::pair<double, double>>& pairs, double tol = kDefaultTol);

struct TwoWeightRow {
  double r = 0.0;
  double sigma_hat = 0.0;
  double ap = 0.0;  // nu^(r)^(1/p) sigma^(r)^(1/p') / w^(r)
  double mp = 0.0;  // (int_0^r nu(s) s / w^(s)^p ds + 1)^(1/p) sigma^(r)^(1/p')
};

struct TwoWeightResult {
  double Ap = 0.0;
  double Mp = 0.0;
  bool sigma_integrable = true;
  std::vector<TwoWeightRow> rows;
  std::vector<std::string> flags;
};

TwoWeightResult two_weight_constants(const RadialWeight& w, const RadialWeight& v, double p,
                                     const std::vector<double>& r_grid, double tol = 1e-9);

}  // namespace bergman
