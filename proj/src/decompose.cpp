#include "bergman/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/errors.hpp"
#include "bergman/lp.hpp"

namespace bergman {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Smallest t with tail(r(t)) <= target (given as a log).
double solve_tail(const RadialWeight& w, double target, double tol) {
  const DeepLog tgt = DeepLog::from_log(target);
  auto below = [&](double t) { return tail_deep(w, Radius::from_t(t), tol) <= tgt; };
  if (below(0.0)) return 0.0;
  if (!below(kMaxT)) throw DomainError("tail level beyond the representable range");
  double lo = 0.0, hi = kMaxT;
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

// floor(1/gap), snapping values within rounding of an integer.
constexpr double kMaxBlocks = 1e6;

long long m_of(const Radius& r) {
  const double v = 1.0 / r.gap();
  const double k = std::round(v);
  if (std::abs(v - k) <= 1e-9 * v) return static_cast<long long>(k);
  return static_cast<long long>(std::floor(v));
}

}  // namespace

std::vector<Radius> rho_sequence(const RadialWeight& w, double K, int count) {
  if (!(K > 1.0)) throw DomainError("K must be > 1");
  if (count < 0) throw DomainError("count must be >= 0");
  const double l0 = tail(w, Radius::from_r(0.0), 1e-13);
  std::vector<Radius> out;
  for (int n = 0; n < count; ++n) out.push_back(Radius::from_t(solve_tail(w, l0 - n * std::log(K), 1e-13)));
  return out;
}

BlockDecomposition delta_blocks(const RadialWeight& w, double K, const AnalyticFunction& f) {
  if (!(K > 1.0)) throw DomainError("K must be > 1");
  if (!f.holomorphic()) throw DomainError("block decomposition needs a holomorphic function");
  BlockDecomposition d;
  d.K = K;
  const long long deg = f.degree_bound();
  const double l0 = tail(w, Radius::from_r(0.0), 1e-13);

  // blocks needed to reach M_n > deg; weights whose tail collapses (dblexp) need
  // astronomically many, which is reported rather than looped over
  if (deg >= 1) {
    const DeepLog end = tail_deep(w, Radius::from_gap(1.0 / (static_cast<double>(deg) + 2.0)), 1e-13);
    const double need = end.is_zero() ? kInf : (l0 - end.log()) / std::log(K);
    if (!(need <= kMaxBlocks)) throw DomainError("block decomposition needs more than 1e6 blocks to cover the degree");
  }

  // rho_0 = 0; keep going until M_n passes the degree or the tail runs out
  d.rho.push_back(Radius::from_r(0.0));
  d.Mn.push_back(1);
  while (d.Mn.back() <= deg) {
    const int n = static_cast<int>(d.rho.size());
    double t;
    try {
      t = solve_tail(w, l0 - n * std::log(K), 1e-13);
    } catch (const DomainError&) {
      break;
    }
    d.rho.push_back(Radius::from_t(t));
    d.Mn.push_back(m_of(d.rho.back()));
  }

  const std::size_t nb = std::max<std::size_t>(1, d.Mn.size() - (d.Mn.back() > deg ? 1 : 0));
  for (std::size_t n = 0; n < nb; ++n) {
    const long long lo = n == 0 ? 0 : d.Mn[n];
    const long long hi = n + 1 < d.Mn.size() ? std::min(d.Mn[n + 1], deg + 1) : deg + 1;
    d.ranges.emplace_back(lo, std::max(lo, hi));
    std::vector<AnalyticFunction::Term> t;
    for (const auto& term : f.terms()) {
      if (term.first >= lo && term.first < hi) t.push_back(term);
    }
    d.blocks.push_back(AnalyticFunction::from_terms(std::move(t)));
  }
  return d;
}

DecompositionNorm decomposition_norm(const RadialWeight& w, double p, const AnalyticFunction& f, double K) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("decomposition norm needs 1 < p < inf");
  DecompositionNorm out;
  out.blocks = delta_blocks(w, K, f);
  double acc = 0.0;
  for (std::size_t n = 0; n < out.blocks.blocks.size(); ++n) {
    const auto& b = out.blocks.blocks[n];
    double h = 0.0;
    if (!b.terms().empty()) {
      const std::size_t L = next_pow2(8 * (static_cast<std::size_t>(b.degree_bound()) + 1));
      h = hardy_mean(b, 1.0, p, L);
    }
    out.block_hp.push_back(h);
    acc += std::pow(K, -static_cast<double>(n)) * std::pow(h, p);
  }
  out.value = acc;
  return out;
}

AnalyticFunction i_omega(const RadialWeight& w, const AnalyticFunction& f, double tol) {
  if (!f.holomorphic()) throw DomainError("I^w acts on holomorphic functions");
  std::vector<AnalyticFunction::Term> t;
  for (const auto& [k, a] : f.terms()) t.emplace_back(k, a * std::exp(moment(w, 2.0 * k + 1.0, tol)));
  return AnalyticFunction::from_terms(std::move(t));
}

AnalyticFunction cesaro_mean(const AnalyticFunction& f, long long n) {
  if (n < 0) throw DomainError("n must be >= 0");
  if (!f.holomorphic()) throw DomainError("Cesaro means act on holomorphic functions");
  std::vector<AnalyticFunction::Term> t;
  for (const auto& [k, a] : f.terms()) {
    if (k <= n) t.emplace_back(k, a * (1.0 - static_cast<double>(k) / static_cast<double>(n + 1)));
  }
  return AnalyticFunction::from_terms(std::move(t));
}

double default_bump(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - t));
  const double b = std::exp(-1.0 / (t - 1.0));
  return a / (a + b);
}

AnalyticFunction vn_polynomial(int n, const BumpFunction& Psi) {
  if (n < 0) throw DomainError("n must be >= 0");
  if (n > 24) throw DomainError("n above 24 is too large to expand");
  if (n == 0) return AnalyticFunction::from_coeffs({cplx(1.0, 0.0), cplx(1.0, 0.0)});
  const long long m = 1LL << (n - 1);
  std::vector<AnalyticFunction::Term> t;
  for (long long k = m; k < 4 * m; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(m);
    const double c = Psi(0.5 * x) - Psi(x);
    if (c != 0.0) t.emplace_back(k, cplx(c, 0.0));
  }
  return AnalyticFunction::from_terms(std::move(t));
}

AnalyticFunction hadamard(const AnalyticFunction& f, const AnalyticFunction& g) {
  if (!f.holomorphic() || !g.holomorphic()) throw DomainError("Hadamard product needs holomorphic inputs");
  std::vector<AnalyticFunction::Term> t;
  for (const auto& [k, a] : f.terms()) {
    const cplx b = g.coeff(k);
    if (b != cplx(0.0, 0.0)) t.emplace_back(k, a * b);
  }
  return AnalyticFunction::from_terms(std::move(t));
}

HadamardCheck hadamard_circle_check(const AnalyticFunction& f, const AnalyticFunction& g, double r, double t) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0,1)");
  HadamardCheck c;
  c.direct = hadamard(f, g).eval(std::polar(r * r, t));
  const std::size_t L =
      next_pow2(4 * (static_cast<std::size_t>(f.degree_bound() + g.degree_bound()) + 1));
  cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    const double s = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(L);
    acc += f.eval(std::polar(r, t + s)) * g.eval(std::polar(r, -s));
  }
  c.integral = acc / static_cast<double>(L);
  return c;
}

LacunaryPair lacunary_test_functions(const RadialWeight& w, double t, double beta, int k_max, double tol) {
  if (!(t > 0.5 && t < 1.0)) throw DomainError("t must lie in (1/2, 1)");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (k_max < 0 || k_max > 61) throw DomainError("k_max must lie in [0, 61]");
  LacunaryPair out;
  std::vector<AnalyticFunction::Term> gt, ft;
  const double lt = std::log(t);
  for (int k = 0; k <= k_max; ++k) {
    const long long e = 1LL << k;
    const double lm = moment(w, 2.0 * static_cast<double>(e), tol);
    const double lg = static_cast<double>(e) * lt - lm;
    const double lf = static_cast<double>(e) * lt - beta * lm;
    const double cg = std::exp(lg), cf = std::exp(lf);
    if (!std::isfinite(cg) || !std::isfinite(cf) || cg == 0.0 || cf == 0.0) {
      out.truncated = true;
      break;
    }
    gt.emplace_back(e, cplx(cg, 0.0));
    ft.emplace_back(e, cplx(cf, 0.0));
    ++out.terms;
  }
  out.g = AnalyticFunction::lacunary(std::move(gt));
  out.f = AnalyticFunction::lacunary(std::move(ft));
  return out;
}

std::vector<Onto2Row> onto2_check(const RadialWeight& w, double alpha, double gamma, const std::vector<double>& r_grid,
                                  int N, double tol) {
  if (!(alpha > 0.0) || !(gamma > 0.0)) throw DomainError("alpha and gamma must be positive");
  if (N < 0) throw DomainError("N must be >= 0");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0 && r_grid[i] < 1.0)) throw DomainError("r grid must lie in (0,1)");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw DomainError("r grid must be increasing");
  }
  auto log_g = [&](const Radius& r) { return -alpha * tail(w, r, tol) - gamma * std::log(r.gap()); };
  const auto breaks = w.model().breakpoints_t();

  std::vector<Onto2Row> out;
  double cum = kNegInf, prev = 0.0;
  for (double r : r_grid) {
    const Radius R = Radius::from_r(r);
    cum = log_add(cum, radial_integral(log_g, prev, R.t(), breaks, tol).log_value);
    prev = R.t();

    double sum = kNegInf;
    const double lr = R.log_r();
    for (int n = N; n <= 1020; ++n) {
      const double x = std::ldexp(1.0, n + 1);
      const double term = x * lr - n * (1.0 - gamma) * kLn2 - alpha * moment(w, x, tol);
      sum = log_add(sum, term);
      // past the peak once x(1-r) is large; the remaining terms fall off doubly exponentially
      if (x * R.gap() > 64.0 && term < sum - 40.0) break;
    }
    Onto2Row row;
    row.r = r;
    row.lhs = std::exp(cum);
    row.rhs = std::exp(sum);
    row.ratio = std::exp(cum - sum);
    out.push_back(row);
  }
  return out;
}

}  // namespace bergman
