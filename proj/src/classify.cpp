#include "bergman/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bergman/constructs.hpp"
#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

constexpr double kLog15 = 0.4054651081081644;  // log 1.5
constexpr double kTailGuard = -1e30;
constexpr std::size_t kWindow = 8;
constexpr std::size_t kMinWindow = 4;

double safe_exp(double v) { return v > 709.0 ? kInf : std::exp(v); }

// Evaluates log ratios on a grid in parallel. A point that fails (accuracy or
// guard) truncates the grid there.
struct GridRun {
  std::vector<double> log_ratios;
  std::size_t valid = 0;
  bool accuracy_failed = false;
  bool guarded = false;
};

enum class PointStatus { ok, guard, accuracy };

GridRun run_grid(std::size_t n, const std::function<PointStatus(std::size_t, double&)>& eval) {
  GridRun run;
  run.log_ratios.assign(n, 0.0);
  std::vector<PointStatus> status(n, PointStatus::ok);
  parallel_for(n, [&](std::size_t i) {
    try {
      status[i] = eval(i, run.log_ratios[i]);
    } catch (const AccuracyError&) {
      status[i] = PointStatus::accuracy;
    }
  });
  run.valid = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (status[i] != PointStatus::ok) {
      run.valid = i;
      run.accuracy_failed = status[i] == PointStatus::accuracy;
      run.guarded = status[i] == PointStatus::guard;
      break;
    }
  }
  run.log_ratios.resize(run.valid);
  return run;
}

void fill_grid(ClassReport& rep, const std::vector<double>& scales, const std::vector<double>& gaps,
               const GridRun& run) {
  rep.grid.clear();
  double est = kNegInf;
  for (std::size_t i = 0; i < run.valid; ++i) {
    const double lr = run.log_ratios[i];
    rep.grid.push_back({scales[i], safe_exp(lr), lr, gaps.empty() ? 0.0 : gaps[i]});
    est = std::max(est, lr);
  }
  rep.est_constant = rep.grid.empty() ? std::numeric_limits<double>::quiet_NaN() : safe_exp(est);
  if (run.guarded) rep.flags.push_back("grid_truncated_unrepresentable_tail");
  if (run.accuracy_failed) rep.flags.push_back("grid_truncated_accuracy");
  if (run.valid < scales.size()) {
    rep.params["grid_points_requested"] = static_cast<double>(scales.size());
  }
}

bool guard_fails(const DeepLog& t) { return t.is_deep() || t.log() < kTailGuard; }

std::vector<double> radii_scales(const std::vector<Radius>& g) {
  std::vector<double> s;
  for (const auto& r : g) s.push_back(r.r());
  return s;
}

std::vector<double> radii_gaps(const std::vector<Radius>& g) {
  std::vector<double> s;
  for (const auto& r : g) s.push_back(r.gap());
  return s;
}

ClassReport doubling_impl(const RadialWeight& w, const std::vector<Radius>& grid, bool guard, double tol) {
  ClassReport rep;
  rep.cls = ClassName::Dhat;
  rep.params["K"] = 2.0;
  auto run = run_grid(grid.size(), [&](std::size_t i, double& out) {
    const Radius r = grid[i];
    const Radius mid = Radius::from_gap(r.gap() / 2.0);
    const DeepLog a = tail_deep(w, r, tol);
    const DeepLog b = tail_deep(w, mid, tol);
    if (guard && (guard_fails(a) || guard_fails(b))) return PointStatus::guard;
    out = log_ratio(a, b);
    return PointStatus::ok;
  });
  fill_grid(rep, radii_scales(grid), radii_gaps(grid), run);
  rep.verdict = upper_bound_verdict(run.log_ratios);
  return rep;
}

ClassReport reverse_impl(const RadialWeight& w, double K, const std::vector<Radius>& grid, bool guard, double tol) {
  if (!(K > 1.0)) throw DomainError("reverse doubling needs K > 1");
  ClassReport rep;
  rep.cls = ClassName::Dcheck;
  rep.params["K"] = K;
  auto run = run_grid(grid.size(), [&](std::size_t i, double& out) {
    const Radius r = grid[i];
    const Radius far = Radius::from_gap(r.gap() / K);
    const DeepLog a = tail_deep(w, r, tol);
    const DeepLog b = tail_deep(w, far, tol);
    if (guard && (guard_fails(a) || guard_fails(b))) return PointStatus::guard;
    out = log_ratio(a, b);
    return PointStatus::ok;
  });
  fill_grid(rep, radii_scales(grid), radii_gaps(grid), run);
  rep.verdict = lower_bound_verdict(run.log_ratios);
  double inf_ratio = kInf;
  for (const auto& g : rep.grid) inf_ratio = std::min(inf_ratio, g.ratio);
  rep.params["inf_ratio"] = inf_ratio;
  std::vector<Radius> used(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(run.valid));
  double beta = std::numeric_limits<double>::quiet_NaN();
  try {
    beta = fit_tail_exponent(w, used, 10, tol);
  } catch (const std::exception&) {
  }
  rep.params["beta_fit"] = beta;
  return rep;
}

ClassReport cond10_impl(const RadialWeight& w, double M, const std::vector<Radius>& grid, bool guard, double tol) {
  if (!(M > 0.0)) throw DomainError("condition (10) needs M > 0");
  ClassReport rep;
  rep.cls = ClassName::Cond10;
  rep.params["M"] = M;
  const Radius origin = Radius::from_r(0.0);
  auto run = run_grid(grid.size(), [&](std::size_t i, double& out) {
    const Radius t = grid[i];
    const DeepLog num = tail_deep(w, t, tol);
    if (guard && guard_fails(num)) return PointStatus::guard;
    const double x = 1.0 / (M * t.gap());
    const double den = segment_moment(w, x, origin, t, tol);
    out = log_ratio(num, DeepLog::from_log(den));
    return PointStatus::ok;
  });
  fill_grid(rep, radii_scales(grid), radii_gaps(grid), run);
  rep.verdict = upper_bound_verdict(run.log_ratios);
  return rep;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::diverges || b == Verdict::diverges) return Verdict::diverges;
  if (a == Verdict::holds && b == Verdict::holds) return Verdict::holds;
  return Verdict::inconclusive;
}

Profile to_profile(const std::string& name, const ClassReport& r) {
  return {name, r.grid, r.verdict, r.est_constant};
}

Profile profile_from_logs(const std::string& name, const std::vector<double>& xs, const std::vector<double>& logs) {
  Profile p;
  p.name = name;
  double est = kNegInf;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    p.points.push_back({xs[i], safe_exp(logs[i]), logs[i], 0.0});
    est = std::max(est, logs[i]);
  }
  p.est_constant = logs.empty() ? std::numeric_limits<double>::quiet_NaN() : safe_exp(est);
  p.verdict = upper_bound_verdict(logs);
  return p;
}

}  // namespace

std::string to_string(ClassName c) {
  switch (c) {
    case ClassName::Dhat: return "Dhat";
    case ClassName::Dcheck: return "Dcheck";
    case ClassName::Dboth: return "Dboth";
    case ClassName::M: return "M";
    case ClassName::Dostanic: return "Dostanic";
    case ClassName::Cond10: return "Cond10";
    case ClassName::DdIntegral: return "DdIntegral";
    case ClassName::Muck7: return "Muck7";
    case ClassName::Ldiag: return "Ldiag";
    case ClassName::Mchar: return "Mchar";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::diverges: return "diverges";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Verdict upper_bound_verdict(const std::vector<double>& L) {
  if (L.size() < kMinWindow) return Verdict::inconclusive;
  const std::size_t w = std::min(kWindow, L.size());
  const std::size_t s = L.size() - w;
  for (std::size_t i = s; i < L.size(); ++i) {
    if (std::isnan(L[i])) return Verdict::inconclusive;
  }
  bool monotone = true;
  for (std::size_t i = s + 1; i < L.size(); ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(L[i - 1]));
    if (L[i] < L[i - 1] - slack) monotone = false;
  }
  const double first = L[s];
  const double last = L.back();
  const double growth = (last == kInf && first == kInf) ? 0.0 : last - first;
  if (monotone && growth >= kLog15) return Verdict::diverges;
  if (last == kInf) return Verdict::inconclusive;
  const auto [mn, mx] = std::minmax_element(L.begin() + static_cast<std::ptrdiff_t>(s), L.end());
  if (last <= first) return Verdict::holds;
  if (*mx - *mn < kLog15) {
    // Still climbing without the steps shrinking: could be a slow divergence.
    bool rising = true;
    for (std::size_t i = s + 1; i < L.size(); ++i) {
      if (!(L[i] - L[i - 1] > 1e-9 * std::max(1.0, std::abs(L[i])))) rising = false;
    }
    const double first_step = L[s + 1] - L[s];
    const double last_step = L.back() - L[L.size() - 2];
    if (rising && last_step > 0.5 * first_step) return Verdict::inconclusive;
    return Verdict::holds;
  }
  return Verdict::inconclusive;
}

Verdict lower_bound_verdict(const std::vector<double>& L) {
  for (double v : L) {
    if (!(v > 1e-9) && !std::isnan(v)) return Verdict::diverges;
  }
  if (L.size() < kMinWindow) return Verdict::inconclusive;
  std::vector<double> d;
  d.reserve(L.size());
  // log(1/(R - 1)) = -log(expm1(log R))
  for (double v : L) d.push_back(v > 700.0 ? -v : -std::log(std::expm1(v)));
  return upper_bound_verdict(d);
}

std::vector<Radius> dyadic_grid(int j_max, int j_min) {
  if (j_max > 60) throw DomainError("dyadic grid limited to j <= 60");
  std::vector<Radius> g;
  for (int j = std::max(0, j_min); j <= j_max; ++j) g.push_back(Radius::from_gap(std::ldexp(1.0, -j)));
  return g;
}

std::vector<double> dyadic_xs(int k_max) {
  std::vector<double> xs;
  for (int k = 0; k <= k_max; ++k) xs.push_back(std::ldexp(1.0, k));
  return xs;
}

ClassReport doubling_profile(const RadialWeight& w, int j_max, double tol) {
  return doubling_impl(w, dyadic_grid(j_max), true, tol);
}

ClassReport doubling_profile(const RadialWeight& w, const std::vector<Radius>& grid, double tol) {
  return doubling_impl(w, grid, false, tol);
}

ClassReport reverse_doubling_profile(const RadialWeight& w, double K, int j_max, double tol) {
  return reverse_impl(w, K, dyadic_grid(j_max), true, tol);
}

ClassReport reverse_doubling_profile(const RadialWeight& w, double K, const std::vector<Radius>& grid, double tol) {
  return reverse_impl(w, K, grid, false, tol);
}

ClassReport cond10_profile(const RadialWeight& w, double M, const std::vector<Radius>& grid, double tol) {
  return cond10_impl(w, M, grid, false, tol);
}

ClassReport m_class_profile(const RadialWeight& w, double K, const std::vector<double>& xs_in, double tol) {
  if (!(K > 1.0)) throw DomainError("M class needs K > 1");
  const std::vector<double> xs = xs_in.empty() ? dyadic_xs(30) : xs_in;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 1.0)) throw DomainError("M class grid needs x >= 1");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("M class grid must be increasing");
  }
  ClassReport rep;
  rep.cls = ClassName::M;
  rep.params["K"] = K;
  auto run = run_grid(xs.size(), [&](std::size_t i, double& out) {
    out = moment(w, xs[i], tol) - moment(w, K * xs[i], tol);
    return PointStatus::ok;
  });
  fill_grid(rep, xs, {}, run);
  const Verdict moments = lower_bound_verdict(run.log_ratios);
  double inf_ratio = kInf;
  for (const auto& g : rep.grid) inf_ratio = std::min(inf_ratio, g.ratio);
  rep.params["inf_ratio"] = inf_ratio;

  const bool is_construct = w.construct() != nullptr;
  const auto tgrid = default_radial_grid(w, ClassName::Cond10);
  ClassReport c10 = cond10_impl(w, K, tgrid, !is_construct, tol);
  Profile mp{"moment_ratio", rep.grid, moments, rep.est_constant};
  rep.aux.push_back(mp);
  rep.aux.push_back(to_profile("cond10", c10));
  for (const auto& f : c10.flags) rep.flags.push_back("cond10:" + f);
  rep.verdict = combine(moments, c10.verdict);
  rep.notes["moment_verdict"] = to_string(moments);
  rep.notes["cond10_verdict"] = to_string(c10.verdict);
  return rep;
}

ClassReport moment_characterization(const RadialWeight& w, double beta, const std::vector<double>& xs_in, Side side,
                                    double tol) {
  if (!(beta > 0.0)) throw DomainError("moment characterization needs beta > 0");
  const std::vector<double> xs = xs_in.empty() ? dyadic_xs(30) : xs_in;
  const RadialWeight wb = modified_weight(w, beta, ModKind::bracket);
  ClassReport rep;
  rep.cls = ClassName::Mchar;
  rep.params["beta"] = beta;
  rep.notes["side"] = side == Side::M_side ? "M_side" : "Dhat_side";
  auto run = run_grid(xs.size(), [&](std::size_t i, double& out) {
    const double x = xs[i];
    if (!(x > 0.0)) throw DomainError("moment characterization needs x > 0");
    const double lhs = beta * std::log(x) + moment(wb, x, tol);
    const double m = moment(w, x, tol);
    out = side == Side::M_side ? m - lhs : lhs - m;
    return PointStatus::ok;
  });
  fill_grid(rep, xs, {}, run);
  rep.verdict = upper_bound_verdict(run.log_ratios);
  return rep;
}

ClassReport dd_integral_test(const RadialWeight& w, double gamma, const std::vector<Radius>& grid, double tol) {
  if (!(gamma > 0.0)) throw DomainError("Dd integral needs gamma > 0");
  ClassReport rep;
  rep.cls = ClassName::DdIntegral;
  rep.params["gamma"] = gamma;
  const auto breaks = w.model().breakpoints_t();
  auto run = run_grid(grid.size(), [&](std::size_t i, double& out) {
    const Radius r = grid[i];
    const DeepLog base = tail_deep(w, r, tol);
    // int_r^1 (tail(s)/tail(r))^gamma ds/(1-s), taken in t = -log(1-s)
    auto f = [&](double t) {
      const DeepLog v = tail_deep(w, Radius::from_t(t), tol);
      return gamma * log_ratio(v, base);
    };
    LogIntegrateOptions opt;
    opt.tol = std::max(tol, 1e-9);
    const auto res = log_integrate_to_inf(f, r.t(), breaks, kMaxT, opt);
    out = res.log_value;
    return PointStatus::ok;
  });
  fill_grid(rep, radii_scales(grid), radii_gaps(grid), run);
  rep.verdict = upper_bound_verdict(run.log_ratios);
  for (double lr : run.log_ratios) {
    if (lr > std::log(1e12)) {
      rep.verdict = Verdict::diverges;
      rep.flags.push_back("ratio_exceeds_1e12");
      break;
    }
  }
  return rep;
}

ClassReport dostanic_profile(const RadialWeight& w, double p, const std::vector<double>& ns, double tol) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("Dostanic condition needs 1 < p < inf");
  // canonical order of the conjugate pair, so that p and p' give identical output
  const double pc = p / (p - 1.0);
  const double lo = std::min(p, pc);
  const double hi = p == 2.0 ? 2.0 : lo / (lo - 1.0);
  ClassReport rep;
  rep.cls = ClassName::Dostanic;
  rep.params["p"] = p;
  auto run = run_grid(ns.size(), [&](std::size_t i, double& out) {
    const double n = ns[i];
    if (!(n >= 0.0)) throw DomainError("Dostanic grid needs n >= 0");
    const double a = moment(w, n * lo + 1.0, tol) / lo;
    const double b = moment(w, n * hi + 1.0, tol) / hi;
    const double c = moment(w, 2.0 * n + 1.0, tol);
    out = (a + b) - c;
    return PointStatus::ok;
  });
  fill_grid(rep, ns, {}, run);
  rep.verdict = upper_bound_verdict(run.log_ratios);
  return rep;
}

std::vector<double> default_dostanic_ns(const RadialWeight& w, double p) {
  const ConstructInfo* info = w.construct();
  std::vector<double> ns;
  if (info == nullptr || info->x_gaps.empty()) {
    for (int k = 0; k <= 60; ++k) ns.push_back(std::round(std::ldexp(1.0, k / 2) * (k % 2 ? 1.4142135623730951 : 1.0)));
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
  }
  // For the interval constructions the failure sits at x = p/(1 - r_{2j+t})
  // for some t in (0, 1); scan t and keep the worst n for each dyadic j.
  const auto& g = info->x_gaps;
  const int N = static_cast<int>(info->params.at("N"));
  const double pc = p / (p - 1.0);
  const double lo = std::min(p, pc);
  const double hi = lo / (lo - 1.0);
  for (int j = 1; 2 * j + 1 < static_cast<int>(g.size()); j *= 2) {
    if (j <= N) continue;
    const double n_lo = lo / g[2 * j];
    const double n_hi = lo / g[2 * j + 1];
    if (!(n_hi < 1e300)) break;
    double best_n = n_lo, best = kNegInf;
    const int steps = 64;
    for (int s = 0; s <= steps; ++s) {
      const double n = std::round(n_lo * std::pow(n_hi / n_lo, static_cast<double>(s) / steps));
      if (n < 1.0) continue;
      const double v = moment(w, n * lo + 1.0, 1e-12) / lo + moment(w, n * hi + 1.0, 1e-12) / hi -
                       moment(w, 2.0 * n + 1.0, 1e-12);
      if (v > best) {
        best = v;
        best_n = n;
      }
    }
    if (ns.empty() || best_n > ns.back()) ns.push_back(best_n);
  }
  return ns;
}

ClassReport l_diagnostics(const RadialWeight& w, const std::vector<double>& xs_in, double tol) {
  const std::vector<double> xs = xs_in.empty() ? dyadic_xs(30) : xs_in;
  for (double x : xs) {
    if (!(x >= 1.0)) throw DomainError("L diagnostics need x >= 1");
  }
  const RadialWeight w1 = modified_weight(w, 1.0, ModKind::paren);
  const RadialWeight w2 = modified_weight(w, 2.0, ModKind::paren);
  const RadialWeight w3 = modified_weight(w, 3.0, ModKind::paren);
  const std::size_t n = xs.size();
  std::vector<double> l1(n), l2neg(n), l2(n), l3(n);
  std::vector<char> ok(n, 0);
  parallel_for(n, [&](std::size_t i) {
    try {
      const double x = xs[i];
      const double m0 = moment(w, x, tol);
      const double m1 = std::exp(moment(w1, x, tol) - m0);
      const double m2 = std::exp(moment(w2, x, tol) - m0);
      const double m3 = std::exp(moment(w3, x, tol) - m0);
      l1[i] = std::log(x * m1);
      // -x^2 L'' = x^2 (m2 - m1^2) >= 0 by Hoelder
      const double var = m2 - m1 * m1;
      l2neg[i] = var > 0.0 ? std::log(x * x * var) : kNegInf;
      l2[i] = std::log(x * x * m2);
      l3[i] = std::log(x * x * x * m3);
      ok[i] = 1;
    } catch (const AccuracyError&) {
    }
  });
  std::size_t valid = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i]) {
      valid = i;
      break;
    }
  }
  auto cut = [valid](std::vector<double> v) {
    v.resize(valid);
    return v;
  };
  std::vector<double> xv(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(valid));
  ClassReport rep;
  rep.cls = ClassName::Ldiag;
  GridRun run;
  run.log_ratios = cut(l1);
  run.valid = valid;
  run.accuracy_failed = valid < n;
  fill_grid(rep, xv, {}, run);
  Profile p1 = profile_from_logs("x_Lp", xv, cut(l1));
  Profile p2 = profile_from_logs("neg_x2_Lpp", xv, cut(l2neg));
  Profile p4 = profile_from_logs("x2_Lp2_minus_Lpp", xv, cut(l2));
  Profile p5 = profile_from_logs("x3_third", xv, cut(l3));
  rep.verdict = combine(combine(p1.verdict, p4.verdict), p5.verdict);
  rep.aux = {p1, p2, p4, p5};
  return rep;
}

double pplus_J(const RadialWeight& w, double r, double tol) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("J needs 0 <= r < 1");
  const Radius rr = Radius::from_r(r);
  // dt/(1-t) = d tau with tau = -log(1-t)
  auto f = [&](double tau) { return -tail(w, Radius::from_t(tau), tol * 0.1); };
  LogIntegrateOptions opt;
  opt.tol = tol;
  const auto res = log_integrate(f, 0.0, rr.t(), w.model().breakpoints_t(), 1.0, opt);
  return std::exp(res.log_value);
}

namespace {

// prop9: the profile peaks just past each s_n, where the tail drops by a double
// exponential over an r-interval far below double spacing. With u = tail(t)/tail(s_n)
// everything outside [s_n, t] is smaller by a double exponential, J tail(s_n) = log n
// at s_n exactly, and the profile reduces to
//   u^(p-1) int_u^1 (log n + (1/v - 1)/L)^p dv,  L = e^(1/(1-s_n)) / (1-s_n),
// which is largest near u = (p-1)/p.
void prop9_pplus_witness(ClassReport& rep, const RadialWeight& w, double p, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double u = (p - 1.0) / p;
  std::vector<double> logs, scales, gaps;
  for (int n = 2; n <= 9; ++n) {
    const double sg = prop9_s_gap(n);
    const double a = std::log(prop9_t_gap(n) / sg);
    const double log_L = 1.0 / sg - std::log(sg);
    const double inv_L = log_L > 700.0 ? 0.0 : std::exp(-log_L);
    const double I = gauss_kronrod<double, 31>::integrate(
        [&](double v) { return std::pow(a + (1.0 / v - 1.0) * inv_L, p); }, u, 1.0, 10, tol);
    // the +1 term: (u tail(s_n))^(p-1)
    const double plus_one = (p - 1.0) * (std::log(u) + tail_deep(w, Radius::from_gap(sg), tol).log());
    logs.push_back(log_add((p - 1.0) * std::log(u) + std::log(I), plus_one));
    scales.push_back(1.0 - sg);
    gaps.push_back(sg);
  }
  GridRun run;
  run.log_ratios = logs;
  run.valid = logs.size();
  fill_grid(rep, scales, gaps, run);
  rep.verdict = upper_bound_verdict(logs);
  rep.notes["method"] = "prop9 local reduction at tail(t) = tail(s_n)(p-1)/p, n=2..9";
}

}  // namespace

ClassReport pplus_necessity(const RadialWeight& w, double p, const std::vector<Radius>& grid_in, double tol) {
  if (!(p > 1.0)) throw DomainError("P+ necessity profile needs p > 1");
  ClassReport rep;
  rep.cls = ClassName::Muck7;
  rep.params["p"] = p;
  if (const ConstructInfo* info = w.construct(); info && info->which == "prop9") {
    // the requested grid cannot resolve the peaks; the witnesses replace it
    prop9_pplus_witness(rep, w, p, tol);
    return rep;
  }
  std::vector<Radius> grid = grid_in;
  std::sort(grid.begin(), grid.end());
  const auto breaks = w.model().breakpoints_t();
  LogIntegrateOptions inner_opt;
  inner_opt.tol = tol * 0.1;
  auto log_J = [&](double tau) {
    auto f = [&](double s) { return -tail(w, Radius::from_t(s), tol * 0.01); };
    return log_integrate(f, 0.0, tau, breaks, 1.0, inner_opt).log_value;
  };
  auto outer = [&](double tau) {
    const Radius r = Radius::from_t(tau);
    const double d = w.log_eval(r);
    if (d == kNegInf) return kNegInf;
    return p * log_J(tau) + d - tau;
  };
  LogIntegrateOptions opt;
  opt.tol = tol;
  double acc = kNegInf;
  double prev = 0.0;
  std::vector<double> logs, scales, gaps;
  bool truncated = false;
  for (const auto& t : grid) {
    const DeepLog tt = tail_deep(w, t, tol * 0.01);
    if (guard_fails(tt)) {
      truncated = true;
      break;
    }
    try {
      const double T = t.t();
      if (T > prev) acc = log_add(acc, log_integrate(outer, prev, T, breaks, 1.0, opt).log_value);
      prev = std::max(prev, T);
    } catch (const AccuracyError&) {
      truncated = true;
      rep.flags.push_back("coarse_inner_grid");
      break;
    }
    logs.push_back(log_add(acc, 0.0) + (p - 1.0) * tt.log());
    scales.push_back(t.r());
    gaps.push_back(t.gap());
  }
  GridRun run;
  run.log_ratios = logs;
  run.valid = logs.size();
  run.guarded = truncated;
  fill_grid(rep, scales, gaps, run);
  rep.verdict = upper_bound_verdict(logs);
  return rep;
}

double fit_tail_exponent(const RadialWeight& w, const std::vector<Radius>& grid, int last, double tol) {
  const std::size_t n = grid.size();
  const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(last));
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - k; i < n; ++i) {
    const double x = std::log(grid[i].gap());
    const DeepLog t = tail_deep(w, grid[i], tol);
    if (t.is_deep()) return std::numeric_limits<double>::quiet_NaN();
    const double y = t.log();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double kk = static_cast<double>(k);
  const double den = kk * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (kk * sxy - sx * sy) / den;
}

std::vector<Radius> default_radial_grid(const RadialWeight& w, ClassName c) {
  if (const ConstructInfo* info = w.construct()) {
    switch (c) {
      case ClassName::Dhat: return info->dhat_scales;
      case ClassName::Dcheck:
      case ClassName::DdIntegral: return info->dcheck_scales;
      case ClassName::Cond10: return info->cond10_scales;
      default: break;
    }
    return info->dcheck_scales;
  }
  switch (c) {
    case ClassName::Cond10:
    case ClassName::Muck7: return dyadic_grid(40, 1);
    default: return dyadic_grid(40);
  }
}

}  // namespace bergman
