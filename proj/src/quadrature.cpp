#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bergman/errors.hpp"
#include "bergman/log_space.hpp"

namespace bergman {

namespace {

struct Panel {
  double a, b;
  double log_value;
  double log_error;
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.log_error < y.log_error; }
};

Panel eval_panel(const std::function<double(double)>& log_f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double g[15];
  int idx = 0;
  g[idx++] = log_f(c);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    g[idx++] = log_f(c - h * xk[i]);
    g[idx++] = log_f(c + h * xk[i]);
  }
  double m = kNegInf;
  for (double v : g) {
    if (std::isnan(v)) throw DomainError("integrand evaluated to NaN");
    m = std::max(m, v);
  }
  if (m == kNegInf || h <= 0.0) return {a, b, kNegInf, kNegInf};

  double kron = wk[0] * std::exp(g[0] - m);
  double gauss = wg[0] * std::exp(g[0] - m);
  idx = 1;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double s = std::exp(g[idx] - m) + std::exp(g[idx + 1] - m);
    idx += 2;
    kron += wk[i] * s;
    if (i % 2 == 0) gauss += wg[i / 2] * s;
  }
  const double lh = std::log(h);
  Panel p{a, b, m + lh + std::log(kron), kNegInf};
  const double diff = std::abs(kron - gauss);
  p.log_error = diff > 0.0 ? m + lh + std::log(diff) : kNegInf;

  // A panel whose endpoint dominates every interior node is hiding a boundary
  // spike; charge it the full endpoint mass so it gets split.
  for (double e : {a, b}) {
    const double ge = log_f(e);
    if (std::isfinite(ge) && ge > m + 0.6931471805599453) {
      p.log_error = std::max(p.log_error, ge + std::log(b - a));
    }
  }
  return p;
}

bool splittable(const Panel& p) {
  const double scale = std::max({std::abs(p.a), std::abs(p.b), 1e-300});
  return (p.b - p.a) > 64.0 * scale * std::numeric_limits<double>::epsilon();
}

LogIntegral run_adaptive(const std::function<double(double)>& log_f, std::vector<Panel> init,
                         const LogIntegrateOptions& opt) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  std::vector<Panel> frozen;
  for (auto& p : init) {
    if (splittable(p) || p.log_error == kNegInf) {
      queue.push(p);
    } else {
      frozen.push_back(p);
    }
  }
  int count = static_cast<int>(init.size());
  // exp(g) is only known to about |g| ulps, so very small or very large
  // integrals cannot be pinned down better than that.
  auto log_tol_for = [&opt](double log_value) {
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(log_value);
    return std::log(std::max(opt.tol, floor));
  };

  auto totals = [&](double& value, double& error) {
    // Sum in a fixed order so the result does not depend on queue layout.
    std::vector<Panel> all;
    all.reserve(queue.size() + frozen.size());
    auto copy = queue;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    value = kNegInf;
    error = kNegInf;
    for (const auto& p : all) {
      value = log_add(value, p.log_value);
      error = log_add(error, p.log_error);
    }
  };

  double value = kNegInf, error = kNegInf;
  // Cheap running totals drive the loop; the ordered sum is taken at the end.
  double run_value = kNegInf, run_error = kNegInf;
  for (const auto& p : init) {
    run_value = log_add(run_value, p.log_value);
    run_error = log_add(run_error, p.log_error);
  }
  int since_resum = 0;
  while (true) {
    if (run_value == kNegInf && run_error == kNegInf) break;
    if (run_error - run_value <= log_tol_for(run_value) || since_resum >= 200) {
      totals(run_value, run_error);
      since_resum = 0;
      if (run_error - run_value <= log_tol_for(run_value)) break;
    }
    if (queue.empty() || count >= opt.max_panels) break;
    Panel p = queue.top();
    queue.pop();
    if (p.log_error == kNegInf) {
      frozen.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    Panel left = eval_panel(log_f, p.a, mid);
    Panel right = eval_panel(log_f, mid, p.b);
    count += 2;
    ++since_resum;
    // Running totals: remove p, add children (log space, clamped).
    run_value = log_add(log_sub(run_value, p.log_value), log_add(left.log_value, right.log_value));
    run_error = log_add(log_sub(run_error, p.log_error), log_add(left.log_error, right.log_error));
    for (auto& c : {left, right}) {
      if (splittable(c) || c.log_error == kNegInf) {
        queue.push(c);
      } else {
        frozen.push_back(c);
      }
    }
  }
  totals(value, error);
  LogIntegral out{value, value == kNegInf ? 0.0 : std::exp(error - value), count};
  if (value != kNegInf && !(error - value <= log_tol_for(value)) && opt.throw_on_failure) {
    throw AccuracyError("adaptive quadrature did not converge", value, out.rel_error);
  }
  return out;
}

std::vector<double> partition(double a, double b, const std::vector<double>& breaks, double max_width) {
  std::vector<double> pts{a};
  for (double x : breaks) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> out{pts.front()};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double w = pts[i] - pts[i - 1];
    const int n = max_width > 0.0 ? std::max(1, static_cast<int>(std::ceil(w / max_width))) : 1;
    for (int k = 1; k < n; ++k) out.push_back(pts[i - 1] + w * k / n);
    out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

LogIntegral log_integrate(const std::function<double(double)>& log_f, double a, double b,
                          const std::vector<double>& breaks, double max_width, const LogIntegrateOptions& opt) {
  if (!(b > a)) return {kNegInf, 0.0, 0};
  const auto pts = partition(a, b, breaks, max_width);
  std::vector<Panel> init;
  init.reserve(pts.size());
  for (std::size_t i = 1; i < pts.size(); ++i) init.push_back(eval_panel(log_f, pts[i - 1], pts[i]));
  return run_adaptive(log_f, std::move(init), opt);
}

LogIntegral log_integrate_to_inf(const std::function<double(double)>& log_f, double a,
                                 const std::vector<double>& breaks, double hard_limit,
                                 const LogIntegrateOptions& opt) {
  if (!(hard_limit > a)) return {kNegInf, 0.0, 0};
  double last_break = a;
  for (double x : breaks) {
    if (x > a && x < hard_limit) last_break = std::max(last_break, x);
  }
  std::vector<Panel> init;
  double total = kNegInf;
  double lo = a;
  double width = 1.0;
  const double log_tol = std::log(opt.tol);
  std::vector<double> sorted_breaks;
  for (double x : breaks) {
    if (x > a && x < hard_limit) sorted_breaks.push_back(x);
  }
  std::sort(sorted_breaks.begin(), sorted_breaks.end());
  std::size_t bi = 0;
  while (lo < hard_limit) {
    double hi = std::min(lo + width, hard_limit);
    while (bi < sorted_breaks.size() && sorted_breaks[bi] <= lo) ++bi;
    if (bi < sorted_breaks.size() && sorted_breaks[bi] < hi) hi = sorted_breaks[bi];
    Panel p = eval_panel(log_f, lo, hi);
    init.push_back(p);
    total = log_add(total, p.log_value);
    const double f_lo = log_f(lo);
    const double f_hi = log_f(hi);
    lo = hi;
    if (lo >= last_break && total != kNegInf && p.log_value < total + log_tol - 40.0 && f_hi <= f_lo) break;
    if (lo >= last_break && total == kNegInf && lo - a > 64.0) break;
    width *= 2.0;
  }
  return run_adaptive(log_f, std::move(init), opt);
}

const GaussRule& gauss_legendre_20() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 20>;
    GaussRule g;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = x.size(); i-- > 0;) {
      g.nodes.push_back(-x[i]);
      g.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      g.nodes.push_back(x[i]);
      g.weights.push_back(w[i]);
    }
    return g;
  }();
  return rule;
}

}  // namespace bergman
