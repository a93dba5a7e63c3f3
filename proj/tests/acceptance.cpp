// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "bergman/analytic.hpp"
#include "bergman/classify.hpp"
#include "bergman/constructs.hpp"
#include "bergman/decompose.hpp"
#include "bergman/kernel.hpp"
#include "bergman/lp.hpp"
#include "bergman/project.hpp"
#include "bergman/weights.hpp"

#ifndef BERGMAN_CLI_PATH
#define BERGMAN_CLI_PATH "bergman"
#endif

using namespace bergman;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// log of the closed-form std tail: substitute u = s^2 and use the incomplete beta
// in the complementary variable 1 - r^2 = gap (2 - gap).
double std_log_tail(double alpha, const Radius& r) {
  const double y = r.gap() * (2.0 - r.gap());
  return std::log((alpha + 1.0) / 2.0) + std::log(boost::math::beta(alpha + 1.0, 0.5, y));
}

Outcome ac1() {
  const auto t0 = Clock::now();
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(i);
  xs.push_back(0.5);
  xs.push_back(M_PI);
  std::vector<Radius> rs{Radius::from_r(0.0), Radius::from_r(0.5)};
  for (int j = 1; j <= 30; ++j) rs.push_back(Radius::from_gap(std::ldexp(1.0, -j)));

  // closed forms and the quadrature fallback against the same oracles
  double worst = 0.0, worst_q = 0.0;
  for (double a : {0.0, 0.5, 1.0, 3.0}) {
    const RadialWeight w = pow_weight(a);
    for (double x : xs) {
      const double oracle = std::beta(x + 1.0, a + 1.0);
      worst = std::max(worst, rel(std::exp(moment(w, x)), oracle));
      worst_q = std::max(worst_q, rel(std::exp(moment_by_quadrature(w.model(), x, kDefaultTol)), oracle));
    }
    for (const auto& r : rs) {
      const double oracle = (a + 1.0) * std::log(r.gap()) - std::log(a + 1.0);
      worst = std::max(worst, std::abs(std::expm1(tail(w, r) - oracle)));
      worst_q = std::max(worst_q, std::abs(std::expm1(tail_by_quadrature(w.model(), r, kDefaultTol) - oracle)));
    }
  }
  for (double a : {0.0, 1.0, 2.0}) {
    const RadialWeight w = std_weight(a);
    for (double x : xs) {
      const double oracle = (a + 1.0) / 2.0 * std::beta((x + 1.0) / 2.0, a + 1.0);
      worst = std::max(worst, rel(std::exp(moment(w, x)), oracle));
      worst_q = std::max(worst_q, rel(std::exp(moment_by_quadrature(w.model(), x, kDefaultTol)), oracle));
    }
    for (const auto& r : rs) {
      worst = std::max(worst, std::abs(std::expm1(tail(w, r) - std_log_tail(a, r))));
      worst_q = std::max(worst_q,
                         std::abs(std::expm1(tail_by_quadrature(w.model(), r, kDefaultTol) - std_log_tail(a, r))));
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst <= 1e-9 && worst_q <= 1e-9 && secs < 10.0;
  o.detail = "max rel err " + fmt(worst) + " (quadrature " + fmt(worst_q) + "), " + fmt(secs) + " s";
  return o;
}

Outcome ac2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  bool bound_ok = true;
  for (double a : {0.0, 1.0, 2.0}) {
    const RadialWeight w = std_weight(a);
    for (int i = 0; i < 200; ++i) {
      const double rad = 0.95 * std::sqrt(u(rng));
      const cplx x = std::polar(rad, 2.0 * M_PI * u(rng));
      const KernelValue kv = kernel_eval(w, x);
      const cplx exact = std::pow(cplx(1.0) - x, -(2.0 + a));
      worst = std::max(worst, std::abs(kv.value - exact) / std::abs(exact));
      // omitted part sum_{n >= M} binom(n + 1 + a, n) x^n, summed directly
      std::complex<long double> omitted = 0.0L, xn = std::pow(std::complex<long double>(x), kv.terms_used);
      long double c = 1.0L;
      for (int n = 1; n <= kv.terms_used; ++n) c *= (n + 1.0L + a) / n;
      for (long long n = kv.terms_used;; ++n) {
        const auto term = c * xn;
        omitted += term;
        if (std::abs(term) < 1e-30L * (1.0L + std::abs(omitted)) && n > kv.terms_used + 50) break;
        c *= (n + 2.0L + a) / (n + 1.0L);
        xn *= std::complex<long double>(x);
      }
      if (static_cast<double>(std::abs(omitted)) > kv.trunc_bound) bound_ok = false;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst <= 1e-8 && bound_ok && secs < 30.0;
  o.detail = "max rel err " + fmt(worst) + ", trunc_bound " + (bound_ok ? "sound" : "VIOLATED") + ", " +
             fmt(secs) + " s";
  return o;
}

std::vector<cplx> grid20() {
  std::vector<cplx> zs;
  for (double r : {0.0, 0.3, 0.6, 0.9, 0.99})
    for (int k = 0; k < 4; ++k) zs.push_back(std::polar(r, 0.4 + k * M_PI / 2.0));
  return zs;
}

// f(z) = sum a_jk z^j conj(z)^k, j + k <= deg
GriddedFunction mixed_polynomial(int deg, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<std::array<double, 4>> terms;
  for (int j = 0; j <= deg; ++j)
    for (int k = 0; j + k <= deg; ++k) terms.push_back({double(j), double(k), nd(rng), nd(rng)});
  return [terms](double r, double th) {
    cplx s = 0.0;
    for (const auto& t : terms) s += cplx(t[2], t[3]) * std::polar(std::pow(r, t[0] + t[1]), (t[0] - t[1]) * th);
    return s;
  };
}

GriddedFunction gridded(const AnalyticFunction& f) {
  return [f](double r, double th) { return f.eval(std::polar(r, th)); };
}

std::vector<RadialWeight> three_weights() {
  return {parse_weight("pow:alpha=0"), parse_weight("std:alpha=1"), parse_weight("construct:prop12")};
}

Outcome ac3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(0, 20);
  double rep = 0.0, idem = 0.0, adj = 0.0;
  const ProjectOptions quad{false};
  for (const auto& w : three_weights()) {
    for (int trial = 0; trial < 3; ++trial) {
      const int d = deg(rng);
      const AnalyticFunction f = random_polynomial(d, rng());
      const QuadratureSpec q = QuadratureSpec::for_weight(w, 20);
      for (cplx z : grid20()) rep = std::max(rep, std::abs(project(w, f, z, q, quad) - f.eval(z)));

      const GriddedFunction g1 = mixed_polynomial(6, rng), g2 = mixed_polynomial(6, rng);
      const AnalyticFunction p1 = project_coefficients(w, g1, q);
      const AnalyticFunction pp1 = project_coefficients(w, gridded(p1), q);
      for (cplx z : grid20()) idem = std::max(idem, std::abs(pp1.eval(z) - p1.eval(z)));

      const AnalyticFunction p2 = project_coefficients(w, g2, q);
      const cplx lhs = inner_product(w, gridded(p1), g2, q);
      const cplx rhs = inner_product(w, g1, gridded(p2), q);
      adj = std::max(adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = rep <= 1e-7 && idem <= 1e-7 && adj <= 1e-6 && secs < 60.0;
  o.detail = "|Pf-f| " + fmt(rep) + ", |PPf-Pf| " + fmt(idem) + ", adjoint " + fmt(adj) + ", " + fmt(secs) + " s";
  return o;
}

Outcome ac4() {
  const std::vector<std::pair<double, double>> pairs{{1, 0}, {2, 1}, {5, 2}, {10, 10}};
  double worst = 0.0;
  for (const auto& w : three_weights()) {
    const QuadratureSpec q = QuadratureSpec::for_weight(w, 24);
    for (auto [m, n] : pairs) {
      const AnalyticFunction f = AnalyticFunction::monomial_mod(m, n);
      const double c = project_monomial(w, m, n);
      for (cplx z : {cplx(0.5, 0.2), cplx(-0.7, 0.1), cplx(0.0, 0.9)}) {
        const cplx expect = c * std::pow(z, m - n);
        const cplx got = project(w, f, z, q, ProjectOptions{false});
        worst = std::max(worst, std::abs(got - expect) / std::max(std::abs(expect), 1e-300));
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-7;
  o.detail = "max rel err " + fmt(worst);
  return o;
}

Outcome ac5() {
  // expected (Dhat, Dcheck, M); empty = anything is acceptable
  struct Case {
    std::string dsl;
    std::string dhat, dcheck, m;
  };
  const std::vector<Case> cases{
    {"pow:alpha=0", "holds", "holds", "holds"},       {"pow:alpha=1", "holds", "holds", "holds"},
    {"pow:alpha=3", "holds", "holds", "holds"},       {"std:alpha=0", "holds", "holds", "holds"},
    {"std:alpha=1", "holds", "holds", "holds"},       {"std:alpha=2", "holds", "holds", "holds"},
    {"exp:c=1,beta=1", "diverges", "holds", ""},      {"dblexp", "diverges", "holds", "holds"},
    {"construct:prop9", "", "diverges", "holds"},     {"construct:prop12", "diverges", "", "diverges"},
    {"construct:thm10", "diverges", "", "diverges"},
  };
  auto ok = [](const std::string& want, Verdict got) {
    return want.empty() || to_string(got) == want || got == Verdict::inconclusive;
  };
  Outcome o;
  int exact = 0, total = 0;
  for (const auto& c : cases) {
    const RadialWeight w = parse_weight(c.dsl);
    const double mk = w.construct() ? w.construct()->m_K : 2.0;
    const Verdict a = doubling_profile(w, default_radial_grid(w, ClassName::Dhat)).verdict;
    const Verdict b = reverse_doubling_profile(w, 2.0, default_radial_grid(w, ClassName::Dcheck)).verdict;
    const Verdict m = m_class_profile(w, mk).verdict;
    const bool good = ok(c.dhat, a) && ok(c.dcheck, b) && ok(c.m, m);
    for (auto [want, got] : {std::pair{c.dhat, a}, {c.dcheck, b}, {c.m, m}})
      if (!want.empty()) {
        ++total;
        exact += to_string(got) == want;
        if (got == Verdict::inconclusive) o.detail += c.dsl + " inconclusive; ";
      }
    if (!good) {
      o.pass = false;
      o.detail += c.dsl + " -> (" + to_string(a) + "," + to_string(b) + "," + to_string(m) + ") ";
    }
  }
  o.detail += std::to_string(exact) + "/" + std::to_string(total) + " specified verdicts matched exactly";
  return o;
}

Outcome ac6() {
  const auto t0 = Clock::now();
  const auto fam = monomial_family(0, 200);
  double worst_band = 0.0;
  bool finite = true;
  for (const char* dsl : {"std:alpha=0", "std:alpha=1"})
    for (int k : {1, 2}) {
      const LpReport r = lp_ratio(parse_weight(dsl), 2.0, k, fam);
      worst_band = std::max(worst_band, r.band);
      finite = finite && r.min_ratio > 0.0 && std::isfinite(r.max_ratio);
    }
  double des = 0.0;
  for (int k : {1, 2}) {
    const LpReport r = lp_ratio(parse_weight("exp:c=1,beta=1"), 2.0, k, fam);
    des = std::max(des, 1.0 / r.min_ratio);
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = finite && worst_band <= 50.0 && des > 1e3 && secs < 120.0;
  o.detail = "max band " + fmt(worst_band) + ", exp max rhs/lhs " + fmt(des) + ", " + fmt(secs) + " s";
  return o;
}

Outcome ac7() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(0, 127);
  double lo = 1e300, hi = 0.0, parseval = 0.0;
  for (const char* dsl : {"pow:alpha=0", "std:alpha=1"}) {
    const RadialWeight w = parse_weight(dsl);
    for (int i = 0; i < 50; ++i) {
      const AnalyticFunction f = random_polynomial(deg(rng), rng());
      const DecompositionNorm dn = decomposition_norm(w, 2.0, f);
      const double bn = bergman_norm(w, f, 2.0);
      const double ratio = dn.value / (bn * bn);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      // ||f||^2 = sum |a_k|^2 2 w_{2k+1}; block H^2 norms add up to sum |a_k|^2
      double coeff_sum = 0.0, bergman_sum = 0.0, block_sum = 0.0;
      for (const auto& [k, a] : f.terms()) {
        coeff_sum += std::norm(a);
        bergman_sum += std::norm(a) * 2.0 * std::exp(moment(w, 2.0 * k + 1.0));
      }
      for (double h : dn.block_hp) block_sum += h * h;
      parseval = std::max({parseval, rel(bn * bn, bergman_sum), rel(block_sum, coeff_sum)});
    }
  }
  Outcome o;
  o.pass = lo >= 0.125 && hi <= 8.0 && parseval <= 1e-8;
  o.detail = "ratio range [" + fmt(lo) + ", " + fmt(hi) + "], Parseval " + fmt(parseval) + ", " +
             fmt(seconds_since(t0)) + " s";
  return o;
}

Outcome ac8() {
  std::vector<double> grid;
  for (const auto& r : dyadic_grid(40)) grid.push_back(r.r());
  const TwoWeightResult one = two_weight_constants(pow_weight(0.0), pow_weight(0.0), 2.0, grid);
  const double a2err = std::abs(one.Ap - 1.0);

  const std::vector<std::string> ds{"pow:alpha=0", "pow:alpha=0.5", "pow:alpha=1", "std:alpha=1", "std:alpha=2"};
  double c = 0.0;
  int tested = 0, skipped = 0;
  for (const auto& a : ds)
    for (const auto& b : ds)
      for (double p : {1.5, 2.0, 3.0}) {
        const TwoWeightResult t = two_weight_constants(parse_weight(a), parse_weight(b), p, grid);
        if (!std::isfinite(t.Ap)) {
          ++skipped;
          continue;
        }
        ++tested;
        c = std::max(c, std::pow(t.Mp, 1.0 - 1.0 / p) / t.Ap);
      }
  Outcome o;
  o.pass = a2err <= 1e-6 && c <= 10.0;
  o.detail = "|A_2(1,1)-1| " + fmt(a2err) + ", c " + fmt(c) + " over " + std::to_string(tested) + " pairs (" +
             std::to_string(skipped) + " with A_p = inf)";
  return o;
}

Outcome ac9() {
  const std::vector<double> ns{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  double sym = 0.0, triv = 0.0;
  for (const char* dsl : {"pow:alpha=0", "std:alpha=1", "exp:c=1,beta=1", "construct:prop12"}) {
    const RadialWeight w = parse_weight(dsl);
    for (double p : {1.5, 3.0, 1.25}) {
      const double pp = p / (p - 1.0);
      const ClassReport a = dostanic_profile(w, p, ns), b = dostanic_profile(w, pp, ns);
      for (std::size_t i = 0; i < a.grid.size(); ++i) sym = std::max(sym, rel(a.grid[i].ratio, b.grid[i].ratio));
    }
    for (const auto& g : dostanic_profile(w, 2.0, ns).grid) triv = std::max(triv, std::abs(g.ratio - 1.0));
  }
  Outcome o;
  o.pass = sym <= 1e-12 && triv == 0.0;
  o.detail = "p/p' max rel diff " + fmt(sym) + ", p=2 max |ratio-1| " + fmt(triv);
  return o;
}

std::string run(const std::string& args, int& status) {
  const std::string cmd = std::string(BERGMAN_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  status = pclose(pipe);
  return out;
}

Outcome ac10() {
  const std::vector<std::string> suite{
    "classify --weight pow:alpha=1 --class dhat",
    "classify --weight exp:c=1,beta=1 --class m",
    "classify --weight construct:prop9 --class dcheck",
    "classify --weight construct:prop12 --class dostanic --p 1.5",
    "classify --weight std:alpha=1 --class ldiag",
    "moments --weight std:alpha=2",
    "kernel --weight std:alpha=0 --x 0.5,0",
    "kernel --weight pow:alpha=1 --z 0.3,0.2 --zeta 0.5,-0.1 --deriv 2",
    "project --weight pow:alpha=0 --f mono:2,1 --z 0.9,0",
    "project --weight std:alpha=1 --f random:12,3 --z 0.2,0.5 --quadrature",
    "project --weight std:alpha=0 --f coeffs:1 --z 0.9,0 --plus",
    "lp-check --weight std:alpha=1 --p 2 --k 1 --family monomials:0..60",
    "decompose --weight pow:alpha=0 --f random:60,5 --p 2",
    "two-weight --omega std:alpha=1 --nu pow:alpha=1 --p 2",
    "construct --which prop12 --emit -",
    "dostanic --weight construct:prop12 --p 1.5",
    "--format csv classify --weight pow:alpha=0 --class dhat",
  };
  Outcome o;
  int compared = 0;
  for (const auto& args : suite) {
    int s0 = 0;
    const std::string ref = run("--jobs 1 " + args, s0);
    for (const char* jobs : {"--jobs 1 ", "--jobs 2 ", "--jobs 4 ", ""}) {
      int s = 0;
      const std::string again = run(jobs + args, s);
      ++compared;
      if (again != ref || s != s0) {
        o.pass = false;
        o.detail += "[" + std::string(jobs) + args + "] differs; ";
      }
    }
    if (s0 != 0) {
      o.pass = false;
      o.detail += "[" + args + "] exit status " + std::to_string(s0) + "; ";
    }
  }
  o.detail += std::to_string(suite.size()) + " invocations, " + std::to_string(compared) + " comparisons";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    {"AC1 moment/tail oracles", ac1},      {"AC2 kernel closed form", ac2},
    {"AC3 reproducing/self-adjoint", ac3}, {"AC4 monomial action", ac4},
    {"AC5 class verdicts", ac5},           {"AC6 Littlewood-Paley band", ac6},
    {"AC7 decomposition norm", ac7},       {"AC8 two-weight constants", ac8},
    {"AC9 Dostanic symmetry", ac9},        {"AC10 CLI determinism", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
