#include "bergman/project.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/errors.hpp"
#include "bergman/kernel.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

constexpr double kLn2 = 0.6931471805599453;

using Sampler = std::function<std::vector<cplx>(double r, std::size_t L)>;

Sampler sampler_of(const AnalyticFunction& f) {
  return [&f](double r, std::size_t L) { return f.circle(r, L); };
}

Sampler sampler_of(const GriddedFunction& f) {
  return [&f](double r, std::size_t L) {
    std::vector<cplx> out(L);
    for (std::size_t j = 0; j < L; ++j) out[j] = f(r, 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(L));
    return out;
  };
}

// w(s) * 2s * (dr weight) at node i; zero where w vanishes.
std::vector<double> area_weights(const RadialWeight& w, const QuadratureSpec& q) {
  std::vector<double> out(q.nodes.size());
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double lw = w.log_eval(Radius::from_gap(q.gaps[i]));
    out[i] = lw == kNegInf ? 0.0 : q.weights[i] * std::exp(lw) * 2.0 * q.nodes[i];
  }
  return out;
}

void check_spec(const QuadratureSpec& q) {
  if (q.nodes.empty() || q.nodes.size() != q.weights.size() || q.gaps.size() != q.nodes.size()) {
    throw DomainError("quadrature spec is empty or inconsistent");
  }
  if (q.angular < 4 || (q.angular & (q.angular - 1)) != 0) throw DomainError("angular resolution must be a power of 2");
}

AnalyticFunction coefficients_impl(const RadialWeight& w, const Sampler& f, const QuadratureSpec& q) {
  check_spec(q);
  const std::size_t L = q.angular;
  const std::size_t nf = L / 2;
  std::vector<cplx> a(nf, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double lw = w.log_eval(Radius::from_gap(q.gaps[i]));
    if (lw == kNegInf) continue;
    const auto fc = fourier_coefficients(f(q.nodes[i], L));
    const double lr = std::log1p(-q.gaps[i]);
    const double base = std::log(2.0 * q.weights[i]) + lw;
    for (std::size_t n = 0; n < nf; ++n) a[n] += std::exp(base + (n + 1.0) * lr) * fc[n];
  }
  for (std::size_t n = 0; n < nf; ++n) a[n] *= std::exp(log_kernel_coeff(w, static_cast<int>(n), q.tol));
  return AnalyticFunction::from_coeffs(std::move(a));
}

PlusValue plus_impl(const RadialWeight& w, const Sampler& f, cplx z, const QuadratureSpec& q) {
  check_spec(q);
  if (!(std::abs(z) < 1.0)) throw DomainError("projection needs |z| < 1");
  const int M = kernel_eval(w, cplx(std::abs(z), 0.0), q.tol).terms_used;
  std::vector<double> lc(static_cast<std::size_t>(M));
  for (int n = 0; n < M; ++n) lc[static_cast<std::size_t>(n)] = log_kernel_coeff(w, n, q.tol);
  const std::size_t L = std::max(q.angular, next_pow2(4 * (static_cast<std::size_t>(M) + 1)));
  const auto aw = area_weights(w, q);
  const double az = std::abs(z);
  const double argz = std::arg(std::conj(z));

  PlusValue out;
  double acc = 0.0;
  bool bad = false;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    if (aw[i] == 0.0) continue;
    const double s = q.nodes[i];
    std::vector<cplx> kc(static_cast<std::size_t>(M));
    for (int n = 0; n < M; ++n) {
      const double mag = n == 0 ? std::exp(lc[0]) : (az == 0.0 ? 0.0 : std::exp(lc[static_cast<std::size_t>(n)] + n * std::log(az * s)));
      kc[static_cast<std::size_t>(n)] = std::polar(mag, n * argz);
    }
    const auto ks = circle_samples(kc, L);
    const auto fs = f(s, L);
    double m = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      if (fs[j].imag() != 0.0 || fs[j].real() < 0.0) bad = true;
      m += fs[j].real() * std::abs(ks[j]);
    }
    acc += aw[i] * m / static_cast<double>(L);
  }
  out.value = acc;
  if (bad) out.flags.push_back("input_not_nonnegative");
  return out;
}

double lp_impl(const RadialWeight& v, const Sampler& f, double p, const QuadratureSpec& q) {
  check_spec(q);
  const auto aw = area_weights(v, q);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    if (aw[i] == 0.0) continue;
    const auto fs = f(q.nodes[i], q.angular);
    double m = 0.0;
    for (const auto& x : fs) m += std::pow(std::abs(x), p);
    acc += aw[i] * m / static_cast<double>(q.angular);
  }
  return std::pow(acc, 1.0 / p);
}

cplx inner_impl(const RadialWeight& w, const Sampler& f, const Sampler& g, const QuadratureSpec& q) {
  check_spec(q);
  const auto aw = area_weights(w, q);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    if (aw[i] == 0.0) continue;
    const auto fs = f(q.nodes[i], q.angular);
    const auto gs = g(q.nodes[i], q.angular);
    cplx m(0.0, 0.0);
    for (std::size_t j = 0; j < q.angular; ++j) m += fs[j] * std::conj(gs[j]);
    acc += aw[i] * m / static_cast<double>(q.angular);
  }
  return acc;
}

cplx eval_coeffs(const AnalyticFunction& f, cplx z) { return f.eval(z); }

}  // namespace

QuadratureSpec QuadratureSpec::for_weight(const RadialWeight& w, long long degree, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const long long deg = std::max<long long>(degree, 0);
  QuadratureSpec q;
  q.tol = tol;
  q.angular = next_pow2(std::max<std::size_t>(16, 4 * (static_cast<std::size_t>(deg) + 1)));

  const double target = std::log(tol) + moment(w, 2.0 * deg + 1.0, tol) - std::log(100.0);
  double t_max = kMaxT;
  for (int j = 1; j * kLn2 < kMaxT; ++j) {
    const double t = j * kLn2;
    if (tail(w, Radius::from_t(t), tol) <= target) {
      t_max = t;
      break;
    }
  }

  std::vector<double> edges;
  for (int j = 0; j * kLn2 < t_max; ++j) edges.push_back(j * kLn2);
  edges.push_back(t_max);
  for (double b : w.model().breakpoints_t()) {
    if (b > 0.0 && b < t_max) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(), [](double a, double b) { return b - a < 1e-14 * std::max(1.0, a); }),
              edges.end());

  const GaussRule& g = gauss_legendre_20();
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    if (w.log_eval(Radius::from_t(mid)) == kNegInf) continue;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double t = mid + half * g.nodes[i];
      const double gap = std::exp(-t);
      q.nodes.push_back(-std::expm1(-t));
      q.gaps.push_back(gap);
      q.weights.push_back(half * g.weights[i] * gap);
    }
  }
  return q;
}

AnalyticFunction project_coefficients(const RadialWeight& w, const AnalyticFunction& f, const QuadratureSpec& q) {
  return coefficients_impl(w, sampler_of(f), q);
}

AnalyticFunction project_coefficients(const RadialWeight& w, const GriddedFunction& f, const QuadratureSpec& q) {
  return coefficients_impl(w, sampler_of(f), q);
}

cplx project(const RadialWeight& w, const AnalyticFunction& f, cplx z, const QuadratureSpec& q, const ProjectOptions& opt) {
  if (!(std::abs(z) < 1.0)) throw DomainError("projection needs |z| < 1");
  if (opt.fast_path && f.holomorphic()) return f.eval(z);
  return eval_coeffs(project_coefficients(w, f, q), z);
}

cplx project(const RadialWeight& w, const GriddedFunction& f, cplx z, const QuadratureSpec& q) {
  if (!(std::abs(z) < 1.0)) throw DomainError("projection needs |z| < 1");
  return eval_coeffs(project_coefficients(w, f, q), z);
}

PlusValue project_plus(const RadialWeight& w, const AnalyticFunction& f, cplx z, const QuadratureSpec& q) {
  return plus_impl(w, sampler_of(f), z, q);
}

PlusValue project_plus(const RadialWeight& w, const GriddedFunction& f, cplx z, const QuadratureSpec& q) {
  return plus_impl(w, sampler_of(f), z, q);
}

double project_monomial(const RadialWeight& w, double m, double n, double tol) {
  const double d = m - n;
  if (!(d >= 0.0) || d != std::floor(d)) throw DomainError("m - n must be a nonnegative integer");
  if (!(n >= 0.0)) throw DomainError("n must be >= 0");
  if (n == 0.0) return 1.0;
  return std::exp(moment(w, 2.0 * m + 1.0, tol) - moment(w, 2.0 * d + 1.0, tol));
}

double lp_norm(const RadialWeight& v, const AnalyticFunction& f, double p, const QuadratureSpec& q) {
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (p == 2.0 && f.holomorphic()) {
    double acc = kNegInf;
    for (const auto& [k, a] : f.terms()) {
      acc = log_add(acc, 2.0 * std::log(std::abs(a)) + std::log(2.0) + moment(v, 2.0 * k + 1.0, q.tol));
    }
    return std::exp(0.5 * acc);
  }
  return lp_impl(v, sampler_of(f), p, q);
}

double lp_norm(const RadialWeight& v, const GriddedFunction& f, double p, const QuadratureSpec& q) {
  if (!(p > 0.0)) throw DomainError("p must be positive");
  return lp_impl(v, sampler_of(f), p, q);
}

cplx inner_product(const RadialWeight& w, const AnalyticFunction& f, const AnalyticFunction& g, const QuadratureSpec& q) {
  if (f.holomorphic() && g.holomorphic()) {
    cplx acc(0.0, 0.0);
    for (const auto& [k, a] : f.terms()) {
      const cplx b = g.coeff(k);
      if (b == cplx(0.0, 0.0)) continue;
      acc += a * std::conj(b) * 2.0 * std::exp(moment(w, 2.0 * k + 1.0, q.tol));
    }
    return acc;
  }
  return inner_impl(w, sampler_of(f), sampler_of(g), q);
}

cplx inner_product(const RadialWeight& w, const GriddedFunction& f, const GriddedFunction& g, const QuadratureSpec& q) {
  return inner_impl(w, sampler_of(f), sampler_of(g), q);
}

LowerBound operator_lower_bound(const RadialWeight& w, const RadialWeight& v, const RadialWeight& eta, double p,
                                const std::vector<std::pair<double, double>>& pairs, double tol) {
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (pairs.empty()) throw DomainError("need at least one (m, n) pair");
  LowerBound out;
  double best = kNegInf;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [m, n] = pairs[i];
    const double d = m - n;
    if (!(d >= 0.0) || d != std::floor(d) || !(n >= 0.0)) throw DomainError("pairs need n >= 0 and m - n in {0,1,2,...}");
    const double lg = p * (moment(w, 2.0 * m + 1.0, tol) - moment(w, 2.0 * d + 1.0, tol)) + moment(eta, p * d + 1.0, tol) -
                      moment(v, p * (m + n) + 1.0, tol);
    out.per_pair.push_back(std::exp(lg));
    if (lg > best) {
      best = lg;
      out.argmax = i;
    }
  }
  out.value = std::exp(best);
  return out;
}

TwoWeightResult two_weight_constants(const RadialWeight& w, const RadialWeight& v, double p,
                                     const std::vector<double>& r_grid, double tol) {
  if (!(p > 1.0)) throw DomainError("two-weight constants need p > 1");
  if (r_grid.empty()) throw DomainError("empty r grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] >= 0.0 && r_grid[i] < 1.0)) throw DomainError("r grid must lie in [0,1)");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw DomainError("r grid must be increasing");
  }
  const double pp = p / (p - 1.0);
  const RadialWeight sigma = sigma_weight(w, v, p);
  const std::vector<double> breaks = sigma.model().breakpoints_t();
  auto log_sigma = [&](const Radius& r) { return sigma.log_eval(r); };

  TwoWeightResult out;
  const std::size_t n = r_grid.size();
  std::vector<double> lsig(n);
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = Radius::from_r(r_grid[i]).t();

  // sigma^ from the top down
  auto last = radial_integral(log_sigma, ts[n - 1], kMaxT, breaks, tol);
  if (last.truncated || std::isnan(last.log_value) || last.log_value == kInf) {
    out.sigma_integrable = false;
    out.Ap = kInf;
    out.Mp = kInf;
    out.flags.push_back("sigma_not_integrable");
  }
  lsig[n - 1] = last.log_value;
  for (std::size_t i = n - 1; i-- > 0;) {
    const auto seg = radial_integral(log_sigma, ts[i], ts[i + 1], breaks, tol);
    lsig[i] = log_add(lsig[i + 1], seg.log_value);
    if (std::isnan(lsig[i]) || lsig[i] == kInf) {
      out.sigma_integrable = false;
      out.Ap = out.Mp = kInf;
    }
  }

  std::vector<double> wb = w.model().breakpoints_t();
  const std::vector<double> vb = v.model().breakpoints_t();
  wb.insert(wb.end(), vb.begin(), vb.end());
  auto log_m = [&](const Radius& r) {
    const double lv = v.log_eval(r);
    if (lv == kNegInf || r.r() == 0.0) return kNegInf;
    return lv + r.log_r() - p * tail(w, r, tol);
  };

  double cum = kNegInf;
  double prev_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ts[i] > prev_t) cum = log_add(cum, radial_integral(log_m, prev_t, ts[i], wb, tol).log_value);
    prev_t = ts[i];
    const Radius r = Radius::from_r(r_grid[i]);
    TwoWeightRow row;
    row.r = r_grid[i];
    row.sigma_hat = std::exp(lsig[i]);
    row.ap = std::exp(tail(v, r, tol) / p + lsig[i] / pp - tail(w, r, tol));
    row.mp = std::exp(log_add(cum, 0.0) / p + lsig[i] / pp);
    out.rows.push_back(row);
  }
  if (out.sigma_integrable) {
    for (const auto& row : out.rows) {
      out.Ap = std::max(out.Ap, row.ap);
      out.Mp = std::max(out.Mp, row.mp);
    }
  }
  return out;
}

}  // namespace bergman
