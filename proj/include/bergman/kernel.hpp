#pragma once

#include <string>
#include <vector>

#include "bergman/fft.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct KernelValue {
  cplx value;
  double trunc_bound = 0.0;  // certified bound on the omitted part of the series
  int terms_used = 0;
};

// log of 1/(2 w_{2n+1}), the n-th kernel coefficient.
double log_kernel_coeff(const RadialWeight& w, int n, double tol = kDefaultTol);

// B_z(zeta) as a function of x = conj(z) zeta, |x| < 1.
KernelValue kernel_eval(const RadialWeight& w, cplx x, double tol = kDefaultTol);

// d^N/dx^N of the series in x.
KernelValue kernel_eval_derivative(const RadialWeight& w, cplx x, int N, double tol = kDefaultTol);

// N-th derivative in z of B_zeta at z.
KernelValue kernel_derivative(const RadialWeight& w, cplx z, cplx zeta, int N, double tol = kDefaultTol);

// Coefficients of zeta -> d^N/dzeta^N B_z(zeta) for real z = a >= 0, truncated
// with the same certified tail bound.
struct KernelSeries {
  std::vector<cplx> coeffs;
  double trunc_bound = 0.0;
};
KernelSeries kernel_derivative_series(const RadialWeight& w, double a, int N, double tol = kDefaultTol);

struct NormCheckPoint {
  double z = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool flagged = false;
};

struct NormCheckReport {
  std::vector<NormCheckPoint> points;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::vector<std::string> flags;
};

// ||(B_z)^(N)||^p in A^p_v against int_0^|z| v^(t) / (w^(t)^p (1-t)^(p(N+1))) dt + 1.
NormCheckReport kernel_norm_check(const RadialWeight& w, const RadialWeight& v, double p, int N,
                                  const std::vector<double>& z_grid, double tol = 1e-8);

}  // namespace bergman
