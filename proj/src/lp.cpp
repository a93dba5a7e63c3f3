#include "bergman/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

namespace {

constexpr std::size_t kMaxAngular = std::size_t{1} << 16;

double falling(long long n, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= static_cast<double>(n - j);
  return f;
}

double max_on_circle(const AnalyticFunction& f, double r, std::size_t L) {
  const auto s = f.circle(r, L);
  std::vector<std::size_t> idx(L);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t top = std::min<std::size_t>(4, L);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(top), idx.end(),
                    [&](std::size_t a, std::size_t b) { return std::abs(s[a]) > std::abs(s[b]); });
  double best = std::abs(s[idx[0]]);
  const double h = 2.0 * M_PI / static_cast<double>(L);
  auto mod = [&](double th) { return std::abs(f.eval(std::polar(r, th))); };
  // golden section on the two neighbouring cells of each candidate
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t c = 0; c < top; ++c) {
    const double th0 = h * static_cast<double>(idx[c]);
    double a = th0 - h, b = th0 + h;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = mod(x1), f2 = mod(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = mod(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = mod(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

// log M_p^p(r, f)
double log_mean_p(const AnalyticFunction& f, double r, double p, std::size_t L, bool parseval) {
  // |f| is constant on circles for one term; p = 2 is Parseval
  if (f.holomorphic() && (f.terms().size() == 1 || (parseval && p == 2.0))) {
    if (f.terms().empty()) return kNegInf;
    const double lr = r > 0.0 ? std::log(r) : kNegInf;
    double acc = kNegInf;
    for (const auto& [k, a] : f.terms()) {
      const double lk = k == 0 ? 0.0 : static_cast<double>(k) * lr;
      acc = log_add(acc, p * (std::log(std::abs(a)) + lk));
    }
    return acc;
  }
  if (f.kind() == AnalyticFunction::Kind::monomial_mod) {
    return r > 0.0 ? p * (f.m() + f.n()) * std::log(r) : (f.m() + f.n() == 0.0 ? 0.0 : kNegInf);
  }
  // |f|^p is a trigonometric polynomial only for even p; otherwise double L until
  // the trapezoid sums settle (geometric convergence away from zeros of f)
  auto mean = [&](std::size_t n) {
    const auto s = f.circle(r, n);
    double acc = 0.0;
    for (const auto& z : s) acc += std::pow(std::abs(z), p);
    return acc / static_cast<double>(n);
  };
  double acc = mean(L);
  const bool even = p == std::floor(p) && std::fmod(p, 2.0) == 0.0 &&
                    static_cast<double>(L) > p * static_cast<double>(std::max<long long>(f.degree_bound(), 1));
  if (!even) {
    for (std::size_t n = 2 * L; n <= kMaxAngular; n *= 2) {
      const double next = mean(n);
      const bool done = std::abs(next - acc) <= 8.0 * std::numeric_limits<double>::epsilon() * next;
      acc = next;
      if (done) break;
    }
  }
  return acc > 0.0 ? std::log(acc) : kNegInf;
}

// log of 2 int_0^1 M_p^p(r, f) w(r) r dr
double log_area_integral(const RadialWeight& w, const AnalyticFunction& f, double p, std::size_t L, double tol) {
  if (f.holomorphic() && f.terms().empty()) return kNegInf;
  auto log_g = [&](const Radius& r) {
    const double lw = w.log_eval(r);
    if (lw == kNegInf || r.r() == 0.0) return kNegInf;
    const double lm = log_mean_p(f, r.r(), p, L, true);
    return lm == kNegInf ? kNegInf : lm + lw + std::log(2.0) + r.log_r();
  };
  const auto res = radial_integral(log_g, 0.0, kMaxT, w.model().breakpoints_t(), tol);
  if (res.truncated) throw AccuracyError("area integral not resolved before the boundary cutoff", res.log_value, res.rel_error);
  return res.log_value;
}

std::size_t resolve_angular(const AnalyticFunction& f, std::size_t angular) {
  const std::size_t need = default_angular(f);
  if (angular == 0) return need;
  if ((angular & (angular - 1)) != 0) throw DomainError("angular resolution must be a power of 2");
  if (angular < 4 * static_cast<std::size_t>(std::max<long long>(f.degree_bound(), 1))) {
    throw DomainError("angular resolution too small for the degree");
  }
  return angular;
}

void check_p(double p) {
  if (!(p > 0.0)) throw DomainError("p must be positive");
}

}  // namespace

std::size_t default_angular(const AnalyticFunction& f) {
  return next_pow2(std::max<std::size_t>(16, 4 * (static_cast<std::size_t>(f.degree_bound()) + 1)));
}

double hardy_mean(const AnalyticFunction& f, double r, double p, std::size_t angular) {
  check_p(p);
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radius must lie in [0,1]");
  const std::size_t L = resolve_angular(f, angular);
  if (p == kPInf) return max_on_circle(f, r, L);
  const double lm = log_mean_p(f, r, p, L, false);
  return std::exp(lm / p);
}

double bergman_norm(const RadialWeight& w, const AnalyticFunction& f, double p, std::size_t angular, double tol) {
  check_p(p);
  const std::size_t L = resolve_angular(f, angular);
  return std::exp(log_area_integral(w, f, p, L, tol) / p);
}

LpReport lp_ratio(const RadialWeight& w, double p, int k, const std::vector<AnalyticFunction>& family,
                  std::size_t angular, double tol) {
  check_p(p);
  if (k < 1) throw DomainError("k must be >= 1");
  for (const auto& f : family) {
    if (!f.holomorphic()) throw DomainError("Littlewood-Paley family must be holomorphic");
  }
  const RadialWeight wk = modified_weight(w, k * p, ModKind::bracket);
  LpReport rep;
  rep.rows.resize(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    const auto& f = family[i];
    const std::size_t L = resolve_angular(f, angular);
    LpRow& row = rep.rows[i];
    row.index = i;
    row.lhs = std::exp(log_area_integral(w, f, p, L, tol));
    double rhs = std::exp(log_area_integral(wk, f.derivative(k), p, L, tol));
    for (int j = 0; j < k; ++j) rhs += std::pow(std::abs(f.coeff(j)) * falling(j, j), p);
    row.rhs = rhs;
    row.ratio = row.lhs / row.rhs;
  });
  rep.min_ratio = kInf;
  rep.max_ratio = 0.0;
  for (const auto& row : rep.rows) {
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
  }
  if (rep.rows.empty()) rep.min_ratio = 0.0;
  rep.band = rep.min_ratio > 0.0 ? rep.max_ratio / rep.min_ratio : kInf;
  return rep;
}

double dirichlet_norm(const RadialWeight& w, double p, int k, const AnalyticFunction& f, std::size_t angular,
                      double tol) {
  check_p(p);
  if (k < 0) throw DomainError("k must be >= 0");
  if (!f.holomorphic()) throw DomainError("Dirichlet norm needs a holomorphic function");
  const RadialWeight wk = modified_weight(w, k * p, ModKind::bracket);
  const AnalyticFunction d = f.derivative(k);
  const std::size_t L = resolve_angular(f, angular);
  double out = std::exp(log_area_integral(wk, d, p, L, tol) / p);
  for (int j = 0; j <= k; ++j) out += std::abs(f.coeff(j)) * falling(j, j);
  return out;
}

std::vector<AnalyticFunction> monomial_family(int lo, int hi) {
  if (lo < 0 || hi < lo) throw DomainError("monomial range must satisfy 0 <= lo <= hi");
  std::vector<AnalyticFunction> out;
  for (int n = lo; n <= hi; ++n) out.push_back(AnalyticFunction::monomial(n));
  return out;
}

std::vector<AnalyticFunction> parse_family(const std::string& spec) {
  const std::string head = "monomials:";
  if (spec.rfind(head, 0) != 0) throw ParseError("family must be monomials:LO..HI", 0);
  const auto dots = spec.find("..", head.size());
  if (dots == std::string::npos) throw ParseError("expected '..'", head.size());
  try {
    std::size_t used = 0;
    const int lo = std::stoi(spec.substr(head.size(), dots - head.size()), &used);
    if (used != dots - head.size()) throw ParseError("bad lower bound", head.size());
    const std::string hs = spec.substr(dots + 2);
    const int hi = std::stoi(hs, &used);
    if (used != hs.size()) throw ParseError("bad upper bound", dots + 2);
    return monomial_family(lo, hi);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad monomial range", head.size());
  } catch (const std::out_of_range&) {
    throw ParseError("monomial range out of range", head.size());
  }
}

}  // namespace bergman
