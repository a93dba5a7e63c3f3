#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bergman/analytic.hpp"
#include "bergman/weights.hpp"

namespace bergman {

// rho_n with tail(rho_n) = tail(0) K^-n, n = 0..count-1; the smallest root
// where the tail is flat.
std::vector<Radius> rho_sequence(const RadialWeight& w, double K, int count);

struct BlockDecomposition {
  double K = 2.0;
  std::vector<Radius> rho;
  std::vector<long long> Mn;  // floor(1/(1 - rho_n))
  // blocks[n] holds the terms of f with exponent in [M_n, M_{n+1}), the first block starting at 0
  std::vector<AnalyticFunction> blocks;
  std::vector<std::pair<long long, long long>> ranges;
};

BlockDecomposition delta_blocks(const RadialWeight& w, double K, const AnalyticFunction& f);

// sum_n K^-n ||Delta_n f||_{H^p}^p
struct DecompositionNorm {
  double value = 0.0;
  std::vector<double> block_hp;  // ||Delta_n f||_{H^p}
  BlockDecomposition blocks;
};
DecompositionNorm decomposition_norm(const RadialWeight& w, double p, const AnalyticFunction& f, double K = 2.0);

// Coefficients multiplied by w_{2k+1}.
AnalyticFunction i_omega(const RadialWeight& w, const AnalyticFunction& f, double tol = kDefaultTol);

// Coefficients multiplied by 1 - j/(n+1) for j <= n, dropped beyond.
AnalyticFunction cesaro_mean(const AnalyticFunction& f, long long n);

// Psi = 1 on (-inf,1], 0 on [2,inf), decreasing in between.
using BumpFunction = std::function<double(double)>;
// Smooth step built from exp(-1/x).
double default_bump(double t);

// V_0 = 1 + z, V_n = sum_k psi(k / 2^(n-1)) z^k with psi(t) = Psi(t/2) - Psi(t).
AnalyticFunction vn_polynomial(int n, const BumpFunction& Psi = default_bump);

AnalyticFunction hadamard(const AnalyticFunction& f, const AnalyticFunction& g);

struct HadamardCheck {
  cplx direct;    // (f*g)(r^2 e^{it})
  cplx integral;  // (1/2pi) int f(r e^{i(t+s)}) g(r e^{-is}) ds
};
HadamardCheck hadamard_circle_check(const AnalyticFunction& f, const AnalyticFunction& g, double r, double t);

struct LacunaryPair {
  AnalyticFunction g;  // sum (tz)^(2^k) / w_{2^(k+1)}
  AnalyticFunction f;  // sum (tz)^(2^k) / w_{2^(k+1)}^beta
  int terms = 0;
  bool truncated = false;  // stopped early because a coefficient left double range
};
LacunaryPair lacunary_test_functions(const RadialWeight& w, double t, double beta, int k_max, double tol = kDefaultTol);

struct Onto2Row {
  double r = 0.0;
  double lhs = 0.0;  // int_0^r dt / (w^(t)^alpha (1-t)^gamma)
  double rhs = 0.0;  // sum_{n>=N} r^(2^(n+1)) / (2^(n(1-gamma)) w_{2^(n+1)}^alpha)
  double ratio = 0.0;
};
std::vector<Onto2Row> onto2_check(const RadialWeight& w, double alpha, double gamma, const std::vector<double>& r_grid,
                                  int N = 0, double tol = 1e-10);

}  // namespace bergman
