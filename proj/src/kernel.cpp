#include "bergman/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

namespace {

constexpr int kRefineAfter = 100000;
constexpr int kMaxTerms = 1000000;

double moment_tol(double tol) { return std::max(tol * 0.1, 1e-13); }

// log of n! / (n-N)!
double log_falling(int n, int N) {
  if (N == 0) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(n - N + 1.0);
}

// Geometric majorant of the tail through one choice of rho in (|x|^(1/2), 1):
// w_{2n+1} >= tail(rho) rho^(2n+1), so the n-th term is at most
// pref * n!/(n-N)! * q^(n-N) with q = |x| / rho^2.
struct Majorant {
  double log_pref;
  double log_q;

  double log_bound(int M, int N) const {
    if (log_q == kNegInf) return kNegInf;
    const double q = std::exp(log_q);
    const double s = q * (M + 2.0) / (M + 2.0 - N);
    if (s >= 1.0) return kInf;
    return log_pref + log_falling(M + 1, N) + (M + 1.0 - N) * log_q - std::log1p(-s);
  }
};

Majorant make_majorant(const RadialWeight& w, double ax, double rho, int N, double tol) {
  const double lt = tail(w, Radius::from_r(rho), tol);
  const double lr = std::log(rho);
  return {-2.0 * N * lr - std::log(2.0) - lr - lt, ax == 0.0 ? kNegInf : std::log(ax) - 2.0 * lr};
}

struct Series {
  cplx sum;
  double bound = 0.0;
  int terms = 0;
  std::vector<cplx> kept;
};

// sum_{n >= N} n!/(n-N)! x^(n-N) c_n until the certified tail is below tol |sum|.
Series sum_series(const RadialWeight& w, cplx x, int N, double tol, bool keep) {
  const double ax = std::abs(x);
  const double arg = std::arg(x);
  const double mt = moment_tol(tol);
  const double s = std::sqrt(ax);
  std::vector<Majorant> maj{make_majorant(w, ax, 0.5 * (s + 1.0), N, mt)};
  bool refined = false;

  Series out;
  // long double accumulation: the partial sums can cancel heavily for arg(x) near pi
  std::complex<long double> acc(0.0L, 0.0L);
  cplx sum(0.0, 0.0);
  for (int n = N;; ++n) {
    const int k = n - N;
    const double lc = log_kernel_coeff(w, n, mt);
    const double lmag = log_falling(n, N) + (k == 0 ? 0.0 : k * std::log(ax)) + lc;
    const std::complex<long double> term =
        lmag == kNegInf ? std::complex<long double>(0.0L, 0.0L)
                        : std::polar(std::exp(static_cast<long double>(lmag)), static_cast<long double>(k) * arg);
    acc += term;
    sum = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
      throw AccuracyError("kernel value leaves double range", kInf, kInf);
    }
    if (keep) out.kept.push_back(cplx(static_cast<double>(term.real()), static_cast<double>(term.imag())));
    ++out.terms;

    double lb = kInf;
    for (const auto& m : maj) lb = std::min(lb, m.log_bound(n, N));
    const double target = std::log(tol) + std::log(std::max(std::abs(sum), 1e-300));
    if (lb <= target) {
      out.sum = sum;
      out.bound = std::exp(lb);
      return out;
    }
    if (!refined && out.terms > kRefineAfter) {
      for (double f : {0.25, 0.75, 0.9}) maj.push_back(make_majorant(w, ax, s + f * (1.0 - s), N, mt));
      refined = true;
    }
    if (out.terms >= kMaxTerms) {
      throw AccuracyError("kernel tail bound does not certify within 1e6 terms", std::abs(sum), std::exp(lb));
    }
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
}

}  // namespace

double log_kernel_coeff(const RadialWeight& w, int n, double tol) {
  return -std::log(2.0) - moment(w, 2.0 * n + 1.0, tol);
}

KernelValue kernel_eval(const RadialWeight& w, cplx x, double tol) {
  check_tol(tol);
  if (!(std::abs(x) < 1.0)) throw DomainError("kernel needs |x| < 1");
  const Series s = sum_series(w, x, 0, tol, false);
  return {s.sum, s.bound, s.terms};
}

KernelValue kernel_eval_derivative(const RadialWeight& w, cplx x, int N, double tol) {
  check_tol(tol);
  if (!(std::abs(x) < 1.0)) throw DomainError("kernel needs |x| < 1");
  if (N < 0) throw DomainError("derivative order must be >= 0");
  const Series s = sum_series(w, x, N, tol, false);
  return {s.sum, s.bound, s.terms};
}

KernelValue kernel_derivative(const RadialWeight& w, cplx z, cplx zeta, int N, double tol) {
  check_tol(tol);
  if (!(std::abs(z) < 1.0) || !(std::abs(zeta) < 1.0)) throw DomainError("kernel needs |z|, |zeta| < 1");
  if (N < 0) throw DomainError("derivative order must be >= 0");
  const Series s = sum_series(w, std::conj(zeta) * z, N, tol, false);
  const cplx f = std::pow(std::conj(zeta), N);
  return {f * s.sum, std::abs(f) * s.bound, s.terms};
}

KernelSeries kernel_derivative_series(const RadialWeight& w, double a, int N, double tol) {
  check_tol(tol);
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("kernel needs 0 <= |z| < 1");
  if (N < 0) throw DomainError("derivative order must be >= 0");
  Series s = sum_series(w, cplx(a, 0.0), N, tol, true);
  const double f = std::pow(a, N);
  KernelSeries out;
  out.coeffs.reserve(s.kept.size());
  for (const auto& t : s.kept) out.coeffs.push_back(f * t);
  out.trunc_bound = f * s.bound;
  return out;
}

NormCheckReport kernel_norm_check(const RadialWeight& w, const RadialWeight& v, double p, int N,
                                  const std::vector<double>& z_grid, double tol) {
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (N < 1) throw DomainError("derivative order must be >= 1");
  for (double z : z_grid) {
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("z grid must lie in [0,1)");
  }
  check_tol(tol);

  NormCheckReport rep;
  rep.points.resize(z_grid.size());
  std::vector<double> vb = v.model().breakpoints_t();
  std::vector<double> wb = w.model().breakpoints_t();
  std::vector<double> both = vb;
  both.insert(both.end(), wb.begin(), wb.end());
  constexpr std::size_t kMaxCoeffs = std::size_t{1} << 18;

  parallel_for(z_grid.size(), [&](std::size_t i) {
    NormCheckPoint& pt = rep.points[i];
    const double a = z_grid[i];
    pt.z = a;

    KernelSeries ks = kernel_derivative_series(w, a, N, tol);
    if (ks.coeffs.size() > kMaxCoeffs) {
      ks.coeffs.resize(kMaxCoeffs);
      pt.flagged = true;
    }
    bool all_zero = std::all_of(ks.coeffs.begin(), ks.coeffs.end(), [](cplx c) { return c == cplx(0.0, 0.0); });

    if (all_zero) {
      pt.lhs = 0.0;
    } else if (p == 2.0) {
      double lsum = kNegInf;
      for (std::size_t k = 0; k < ks.coeffs.size(); ++k) {
        const double m = std::abs(ks.coeffs[k]);
        if (m == 0.0) continue;
        lsum = log_add(lsum, 2.0 * std::log(m) + std::log(2.0) + moment(v, 2.0 * k + 1.0, moment_tol(tol)));
      }
      pt.lhs = std::exp(lsum);
    } else {
      const std::size_t L = next_pow2(std::max<std::size_t>(64, 4 * (ks.coeffs.size() + 1)));
      auto log_g = [&](const Radius& r) {
        const double lv = v.log_eval(r);
        if (lv == kNegInf || r.r() == 0.0) return kNegInf;
        const double lr = r.log_r();
        std::vector<cplx> c(ks.coeffs.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = ks.coeffs[k] * std::exp(k * lr);
        const auto s = circle_samples(c, L);
        double acc = 0.0;
        for (const auto& z : s) acc += std::pow(std::abs(z), p);
        acc /= static_cast<double>(L);
        if (acc == 0.0) return kNegInf;
        return std::log(acc) + lv + std::log(2.0) + lr;
      };
      try {
        const auto r = radial_integral(log_g, 0.0, kMaxT, vb, tol);
        pt.lhs = std::exp(r.log_value);
        if (r.truncated) pt.flagged = true;
      } catch (const AccuracyError& e) {
        pt.lhs = std::exp(e.best_estimate());  // log value
        pt.flagged = true;
      }
    }

    double rhs_int = 0.0;
    if (a > 0.0) {
      auto log_h = [&](const Radius& r) {
        return tail(v, r, moment_tol(tol)) - p * tail(w, r, moment_tol(tol)) - p * (N + 1.0) * std::log(r.gap());
      };
      try {
        rhs_int = std::exp(radial_integral(log_h, 0.0, Radius::from_r(a).t(), both, tol).log_value);
      } catch (const AccuracyError& e) {
        rhs_int = std::exp(e.best_estimate());
        pt.flagged = true;
      }
    }
    pt.rhs = rhs_int + 1.0;
    pt.ratio = pt.lhs / pt.rhs;
  });

  rep.min_ratio = kInf;
  rep.max_ratio = 0.0;
  for (const auto& pt : rep.points) {
    rep.min_ratio = std::min(rep.min_ratio, pt.ratio);
    rep.max_ratio = std::max(rep.max_ratio, pt.ratio);
    if (pt.flagged) rep.flags = {"coarse_quadrature"};
  }
  if (rep.points.empty()) rep.min_ratio = 0.0;
  return rep;
}

}  // namespace bergman
