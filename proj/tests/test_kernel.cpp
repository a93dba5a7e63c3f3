#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bergman/kernel.hpp"
#include "bergman/project.hpp"

using namespace bergman;

namespace {

// (a)_N
double rising(double a, int N) {
  double r = 1.0;
  for (int i = 0; i < N; ++i) r *= a + i;
  return r;
}

}  // namespace

TEST(KernelEval, OverflowIsAnAccuracyFailure) {
  EXPECT_THROW(kernel_eval(dblexp_weight(), 0.999), AccuracyError);
  EXPECT_THROW(kernel_eval(std_weight(0.0), 0.9999999, 1e-15), AccuracyError);
}

TEST(KernelEval, Examples) {
  EXPECT_NEAR(kernel_eval(std_weight(0.0), 0.0).value.real(), 1.0, 1e-14);
  EXPECT_NEAR(kernel_eval(std_weight(0.0), 0.5).value.real(), 4.0, 1e-12);
  EXPECT_NEAR(kernel_eval(std_weight(1.0), 0.5).value.real(), 8.0, 1e-12);
  EXPECT_THROW(kernel_eval(std_weight(0.0), 1.0), DomainError);
  EXPECT_THROW(kernel_eval(std_weight(0.0), cplx(0.8, 0.7)), DomainError);
}

TEST(KernelEval, StdClosedForm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const RadialWeight w = std_weight(a);
    for (int i = 0; i < 40; ++i) {
      const cplx x = std::polar(0.95 * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
      const KernelValue k = kernel_eval(w, x, 1e-11);
      const cplx exact = std::pow(1.0 - x, -(2.0 + a));
      EXPECT_LT(std::abs(k.value - exact) / std::abs(exact), 1e-9) << a << " " << x;
      EXPECT_GE(k.terms_used, 1);
      EXPECT_LE(k.trunc_bound, 1e-11 * std::abs(k.value));
    }
  }
}

TEST(KernelEval, StdClosedFormIllConditioned) {
  // Near x = -0.95 the series sum_n |c_n x^n| exceeds |B| by
  // kappa = (|1-x|/(1-|x|))^(2+a), about 7e7 for a = 3. Coefficients come out of
  // log space with relative error ~ eps |log c_n|, so the error scales with kappa.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = 3.0;
  const RadialWeight w = std_weight(a);
  for (int i = 0; i < 40; ++i) {
    const cplx x = std::polar(0.95 * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
    const KernelValue k = kernel_eval(w, x, 1e-11);
    const cplx exact = std::pow(1.0 - x, -(2.0 + a));
    const double kappa = std::pow(std::abs(1.0 - x) / (1.0 - std::abs(x)), 2.0 + a);
    const double eps = std::numeric_limits<double>::epsilon();
    EXPECT_LT(std::abs(k.value - exact) / std::abs(exact), 1e-9 + 2.0 * eps * kappa) << x;
  }
}

TEST(KernelEval, TruncationBoundSoundOnDoubledSum) {
  // same coefficients as kernel_eval (moments at tol / 10), same long double summation;
  // only the omitted part and rounding of order eps sum |terms| may differ
  for (const char* d : {"exp:c=1,beta=1", "construct:prop12", "pow:alpha=3"}) {
    const RadialWeight w = parse_weight(d);
    for (cplx x : {cplx(0.3, 0.1), cplx(-0.7, 0.2), cplx(0.0, 0.9)}) {
      const KernelValue k = kernel_eval(w, x, 1e-9);
      std::complex<long double> acc = 0.0L;
      long double abs_sum = 0.0L;
      for (int n = 0; n < 2 * k.terms_used; ++n) {
        const long double lm = log_kernel_coeff(w, n, 1e-10) + (n == 0 ? 0.0 : n * std::log(std::abs(x)));
        const std::complex<long double> t = std::polar(std::exp(lm), static_cast<long double>(n) * std::arg(x));
        acc += t;
        abs_sum += std::abs(t);
      }
      const cplx longer(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(abs_sum);
      EXPECT_LE(std::abs(longer - k.value), k.trunc_bound + slack) << d << " " << x;
    }
  }
}

TEST(KernelEval, DiagonalPositiveIncreasing) {
  for (const char* d : {"pow:alpha=0", "exp:c=1,beta=1", "construct:prop12", "dblexp"}) {
    const RadialWeight w = parse_weight(d);
    const double floor = std::exp(-std::log(2.0) - moment(w, 1.0));
    double prev = 0.0;
    bool overflowed = false;
    for (double r = 0.0; r < 0.95; r += 0.05) {
      // dblexp moments fall like exp(-e^x): the diagonal leaves double range near r = 0.9
      // and stays out of it
      if (overflowed) {
        EXPECT_THROW(kernel_eval(w, r * r), AccuracyError) << d << " " << r;
        continue;
      }
      KernelValue k;
      try {
        k = kernel_eval(w, r * r);
      } catch (const AccuracyError&) {
        EXPECT_EQ(std::string(d), "dblexp") << r;
        EXPECT_GT(r, 0.5);
        overflowed = true;
        continue;
      }
      EXPECT_EQ(k.value.imag(), 0.0);
      EXPECT_GE(k.value.real(), floor * (1 - 1e-12)) << d;
      EXPECT_GT(k.value.real(), prev) << d << " " << r;
      prev = k.value.real();
    }
  }
}

TEST(KernelDerivative, Examples) {
  const RadialWeight w = std_weight(0.0);
  EXPECT_NEAR(kernel_derivative(w, 0.0, 0.5, 1).value.real(), 1.0, 1e-12);
  const cplx z(0.2, -0.4), zeta(-0.3, 0.6);
  EXPECT_NEAR(std::abs(kernel_derivative(w, z, zeta, 0).value - kernel_eval(w, std::conj(zeta) * z).value), 0.0,
              1e-12);
}

TEST(KernelDerivative, StdClosedForm) {
  for (double a : {0.0, 1.0, 2.5})
    for (int N : {1, 2, 3, 5}) {
      const cplx z(0.4, 0.3), zeta(0.5, -0.6);
      const cplx x = std::conj(zeta) * z;
      const cplx exact = std::pow(std::conj(zeta), N) * rising(2.0 + a, N) * std::pow(1.0 - x, -(2.0 + a + N));
      const KernelValue k = kernel_derivative(std_weight(a), z, zeta, N, 1e-11);
      EXPECT_LT(std::abs(k.value - exact) / std::abs(exact), 1e-9) << a << " " << N;
    }
}

TEST(KernelDerivative, Symmetry) {
  // z B_zeta'(z) = conj(zeta B_z'(zeta))
  for (const char* d : {"std:alpha=0", "pow:alpha=1", "exp:c=1,beta=1", "construct:prop12"}) {
    const RadialWeight w = parse_weight(d);
    const cplx z(0.3, 0.0), zeta(0.0, 0.5);
    const cplx lhs = z * kernel_derivative(w, z, zeta, 1).value;
    const cplx rhs = std::conj(zeta * kernel_derivative(w, zeta, z, 1).value);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs))) << d;
  }
}

TEST(KernelDerivative, SeriesMatchesPointwise) {
  const RadialWeight w = pow_weight(1.0);
  const double a = 0.6;
  const KernelSeries s = kernel_derivative_series(w, a, 2, 1e-12);
  for (cplx zeta : {cplx(0.1, 0.2), cplx(-0.5, 0.4)}) {
    cplx v = 0.0, zk = 1.0;
    for (const cplx c : s.coeffs) {
      v += c * zk;
      zk *= zeta;
    }
    // d^2/dzeta^2 B_a(zeta) = d^2/dzeta^2 B_zeta... at real a: same series in conj(a) zeta = a zeta
    const KernelValue k = kernel_eval_derivative(w, a * zeta, 2, 1e-12);
    EXPECT_LT(std::abs(v - a * a * k.value), 1e-9 * std::abs(v));
  }
}

TEST(Reproducing, InnerProductWithKernel) {
  std::mt19937_64 rng(9);
  for (const char* d : {"pow:alpha=1", "exp:c=1,beta=1", "construct:prop12"}) {
    const RadialWeight w = parse_weight(d);
    const QuadratureSpec q = QuadratureSpec::for_weight(w, 32, 1e-12);
    const AnalyticFunction f = random_polynomial(20, rng());
    for (cplx z : {cplx(0.0, 0.0), cplx(0.3, -0.2), cplx(-0.5, 0.4)}) {
      const GriddedFunction fg = [&](double r, double t) { return f.eval(std::polar(r, t)); };
      // B_z(zeta) = sum_n c_n |z|^n (e^{-i arg z} zeta)^n; pointwise agreement is checked above
      const KernelSeries ks = kernel_derivative_series(w, std::abs(z), 0, 1e-13);
      const cplx rot = std::polar(1.0, -std::arg(z));
      const GriddedFunction bz = [&](double r, double t) {
        const cplx u = rot * std::polar(r, t);
        cplx v = 0.0;
        for (auto it = ks.coeffs.rbegin(); it != ks.coeffs.rend(); ++it) v = v * u + *it;
        return v;
      };
      const cplx got = inner_product(w, fg, bz, q);
      EXPECT_LT(std::abs(got - f.eval(z)), 1e-8 * std::max(1.0, std::abs(f.eval(z)))) << d << " " << z;
    }
  }
}

TEST(NormCheck, Examples) {
  const RadialWeight w = std_weight(0.0);
  const NormCheckReport a = kernel_norm_check(w, w, 2.0, 1, {0.0});
  ASSERT_EQ(a.points.size(), 1u);
  EXPECT_NEAR(a.points[0].rhs, 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(a.points[0].lhs));

  const NormCheckReport b = kernel_norm_check(w, w, 1.0, 1, {0.5, 0.9, 0.99});
  for (const auto& pt : b.points) {
    EXPECT_GE(pt.ratio, 0.1) << pt.z;
    EXPECT_LE(pt.ratio, 10.0) << pt.z;
  }

  const NormCheckReport c = kernel_norm_check(pow_weight(1.0), pow_weight(2.0), 2.0, 1, {0.5, 0.9, 0.99, 0.999});
  // z = 0 is left out: B_0 is constant, so its derivative vanishes there
  EXPECT_GT(c.min_ratio, 0.0);
  EXPECT_LT(c.max_ratio / c.min_ratio, 100.0);
}

TEST(NormCheck, ParsevalAgainstDirectFft) {
  // p = 2 goes through moments; p = 2.0000001 through the FFT and radial quadrature
  const RadialWeight w = pow_weight(1.0);
  const NormCheckReport a = kernel_norm_check(w, w, 2.0, 1, {0.3, 0.8});
  const NormCheckReport b = kernel_norm_check(w, w, 2.0 + 1e-7, 1, {0.3, 0.8});
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(a.points[i].lhs / b.points[i].lhs, 1.0, 1e-5);
}
