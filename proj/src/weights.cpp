#include "bergman/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bergman/constructs.hpp"
#include "bergman/errors.hpp"
#include "bergman/format.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kDyadicT = 60.0 * kLn2;

// log Gamma(a) / Gamma(a + d) for a > 0, d > 0, also for very large a.
double log_gamma_ratio(double a, double d) {
  if (a < 1e15) {
    const double v = boost::math::tgamma_delta_ratio(a, d);
    if (v > 1e-300 && std::isfinite(v)) return std::log(v);
  }
  // Gamma(a)/Gamma(a+d) = a^-d (1 - d(d-1)/(2a) + ...)
  return -d * std::log(a) + std::log1p(-d * (d - 1.0) / (2.0 * a));
}

// log B(a, b) for a > 0 and moderate b.
double log_beta(double a, double b) { return std::lgamma(b) + log_gamma_ratio(a, b); }

bool within_tol(const RadialIntegral& r, double tol) {
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(r.log_value);
  return r.rel_error <= std::max(tol, floor);
}

std::string fmt_param(double v) { return format_double_short(v); }

// (1 - r)^alpha
class PowModel final : public WeightModel {
 public:
  PowModel(double alpha, std::string desc) : alpha_(alpha), desc_(std::move(desc)) {}

  double log_density(const Radius& r) const override { return alpha_ == 0.0 ? 0.0 : alpha_ * std::log(r.gap()); }

  std::optional<DeepLog> closed_log_tail(const Radius& r) const override {
    return DeepLog::from_log((alpha_ + 1.0) * std::log(r.gap()) - std::log(alpha_ + 1.0));
  }

  std::optional<double> closed_log_moment(double x) const override {
    return std::lgamma(alpha_ + 1.0) + log_gamma_ratio(x + 1.0, alpha_ + 1.0);
  }

  std::optional<double> closed_log_segment(double x, const Radius& a, const Radius& b) const override {
    if (alpha_ != 0.0) return std::nullopt;
    // (b^(x+1) - a^(x+1)) / (x+1)
    const double la = a.r() == 0.0 ? kNegInf : (x + 1.0) * a.log_r();
    const double lb = b.r() == 0.0 ? kNegInf : (x + 1.0) * b.log_r();
    return log_sub(lb, la) - std::log(x + 1.0);
  }

  std::string descriptor() const override { return desc_; }

  double alpha() const { return alpha_; }

 private:
  double alpha_;
  std::string desc_;
};

// (alpha+1)(1 - r^2)^alpha
class StdModel final : public WeightModel {
 public:
  StdModel(double alpha, std::string desc) : alpha_(alpha), desc_(std::move(desc)) {}

  double log_density(const Radius& r) const override {
    if (alpha_ == 0.0) return 0.0;
    return std::log(alpha_ + 1.0) + alpha_ * (std::log(r.gap()) + std::log(2.0 - r.gap()));
  }

  std::optional<DeepLog> closed_log_tail(const Radius& r) const override {
    // (alpha+1)/2 * int_0^V v^alpha (1-v)^(-1/2) dv with V = 1 - r^2
    const double a = alpha_ + 1.0;
    const double V = r.gap() * (2.0 - r.gap());
    double log_inc;
    if (V < 0.5) {
      // V^a * sum_k (1/2)_k / k! * V^k / (a + k)
      double term = 1.0, sum = 1.0 / a;
      for (int k = 1; k < 2000; ++k) {
        term *= (k - 0.5) / k * V;
        const double add = term / (a + k);
        sum += add;
        if (add < 1e-18 * sum) break;
      }
      log_inc = a * std::log(V) + std::log(sum);
    } else {
      log_inc = std::log(boost::math::beta(a, 0.5, V));
    }
    return DeepLog::from_log(std::log(a / 2.0) + log_inc);
  }

  std::optional<double> closed_log_moment(double x) const override {
    return std::log((alpha_ + 1.0) / 2.0) + log_beta((x + 1.0) / 2.0, alpha_ + 1.0);
  }

  std::string descriptor() const override { return desc_; }

 private:
  double alpha_;
  std::string desc_;
};

// exp(-c / (1-r)^beta)
class ExpModel final : public WeightModel {
 public:
  ExpModel(double c, double beta, std::string desc) : c_(c), beta_(beta), desc_(std::move(desc)) {}

  double log_density(const Radius& r) const override { return -c_ * std::exp(-beta_ * std::log(r.gap())); }

  std::string descriptor() const override { return desc_; }

 private:
  double c_, beta_;
  std::string desc_;
};

// Tail exp(-exp(1/(1-r))); the density is minus its derivative.
class DblExpModel final : public WeightModel {
 public:
  double log_density(const Radius& r) const override {
    const double inv = 1.0 / r.gap();
    const double e = std::exp(inv);
    if (!std::isfinite(e)) return kNegInf;
    return -e + inv - 2.0 * std::log(r.gap());
  }

  std::optional<DeepLog> closed_log_tail(const Radius& r) const override {
    return DeepLog::from_neg_exp(1.0 / r.gap());
  }

  std::optional<double> closed_log_moment(double x) const override { return segment(x, 1.0, kInf); }

  std::optional<double> closed_log_segment(double x, const Radius& a, const Radius& b) const override {
    return segment(x, 1.0 / a.gap(), 1.0 / b.gap());
  }

  std::string descriptor() const override { return "dblexp"; }

 private:
  // With v = exp(1/(1-r)) - exp(1/(1-a)) the segment integral becomes
  // tail(a) * int_0^{V} r(v)^x e^{-v} dv, which is smooth however steep the
  // density is at a.
  double segment(double x, double inv_a, double inv_b) const {
    const DeepLog ta = DeepLog::from_neg_exp(inv_a);
    if (ta.is_deep()) return kNegInf;
    if (!(inv_b > inv_a)) return kNegInf;
    double v_max = 1e300;
    const double log_vb = inv_a + std::log(std::expm1(std::min(inv_b - inv_a, 700.0)));
    if (log_vb < 690.0) v_max = std::exp(log_vb);
    auto f = [x, inv_a](double v) {
      if (v <= 0.0) {
        if (x == 0.0) return -v;
        const double d0 = 1.0 / inv_a;
        return d0 >= 1.0 ? kNegInf : x * std::log1p(-d0) - v;
      }
      const double lv = std::log(v) - inv_a;
      const double d = 1.0 / (inv_a + (lv < -700.0 ? 0.0 : std::log1p(std::exp(lv))));
      const double lr = x == 0.0 ? 0.0 : x * std::log1p(-d);
      return lr - v;
    };
    LogIntegrateOptions opt;
    opt.tol = 1e-13;
    const LogIntegral r = log_integrate_to_inf(f, 0.0, {}, v_max, opt);
    return ta.log() + r.log_value;
  }
};

// Piecewise linear samples, constant beyond both ends.
class TableModel final : public WeightModel {
 public:
  TableModel(std::vector<double> r, std::vector<double> w, std::string desc)
    : r_(std::move(r)), w_(std::move(w)), desc_(std::move(desc)) {
    // cumulative tail from each sample to 1
    cum_.assign(r_.size(), 0.0);
    cum_.back() = w_.back() * (1.0 - r_.back());
    for (std::size_t i = r_.size() - 1; i-- > 0;) {
      cum_[i] = cum_[i + 1] + 0.5 * (w_[i] + w_[i + 1]) * (r_[i + 1] - r_[i]);
    }
  }

  double value(double r) const {
    if (r <= r_.front()) return w_.front();
    if (r >= r_.back()) return w_.back();
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
    const double s = (r - r_[i]) / (r_[i + 1] - r_[i]);
    return w_[i] + s * (w_[i + 1] - w_[i]);
  }

  double log_density(const Radius& r) const override {
    const double v = value(r.r());
    return v > 0.0 ? std::log(v) : kNegInf;
  }

  std::optional<DeepLog> closed_log_tail(const Radius& rad) const override {
    const double r = rad.r();
    double t;
    if (r >= r_.back()) {
      t = w_.back() * rad.gap();
    } else if (r <= r_.front()) {
      t = cum_.front() + w_.front() * (r_.front() - r);
    } else {
      const auto it = std::upper_bound(r_.begin(), r_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
      t = cum_[i + 1] + 0.5 * (value(r) + w_[i + 1]) * (r_[i + 1] - r);
    }
    return DeepLog::from_log(std::log(t));
  }

  std::vector<double> breakpoints_t() const override {
    std::vector<double> out;
    for (double r : r_) {
      if (r > 0.0) out.push_back(-std::log1p(-r));
    }
    return out;
  }

  std::vector<std::pair<Radius, Radius>> zero_intervals() const override {
    std::vector<std::pair<Radius, Radius>> out;
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
      if (w_[i] == 0.0 && w_[i + 1] == 0.0) out.emplace_back(Radius::from_r(r_[i]), Radius::from_r(r_[i + 1]));
    }
    return out;
  }

  std::string descriptor() const override { return desc_; }

  std::vector<std::string> flags() const override {
    std::vector<std::string> f{"table_tail_extrapolated"};
    if (r_.front() > 0.0) f.push_back("table_head_extrapolated");
    return f;
  }

 private:
  std::vector<double> r_, w_, cum_;
  std::string desc_;
};

class BracketModel final : public WeightModel {
 public:
  BracketModel(RadialWeight base, double beta) : base_(std::move(base)), beta_(beta) {}
  double log_density(const Radius& r) const override {
    const double b = base_.log_eval(r);
    return b == kNegInf ? b : b + beta_ * std::log(r.gap());
  }
  std::vector<double> breakpoints_t() const override { return base_.model().breakpoints_t(); }
  std::vector<std::pair<Radius, Radius>> zero_intervals() const override { return base_.zero_intervals(); }
  std::string descriptor() const override { return base_.descriptor() + "|bracket:" + fmt_param(beta_); }
  std::vector<std::string> flags() const override { return base_.model().flags(); }

 private:
  RadialWeight base_;
  double beta_;
};

class ParenModel final : public WeightModel {
 public:
  ParenModel(RadialWeight base, double beta) : base_(std::move(base)), beta_(beta) {}
  double log_density(const Radius& r) const override {
    const double b = base_.log_eval(r);
    if (b == kNegInf) return b;
    // (log 1/r)^beta
    return b + beta_ * std::log(-r.log_r());
  }
  std::vector<double> breakpoints_t() const override { return base_.model().breakpoints_t(); }
  std::vector<std::pair<Radius, Radius>> zero_intervals() const override { return base_.zero_intervals(); }
  std::string descriptor() const override { return base_.descriptor() + "|paren:" + fmt_param(beta_); }
  std::vector<std::string> flags() const override { return base_.model().flags(); }

 private:
  RadialWeight base_;
  double beta_;
};

class MaskedModel final : public WeightModel {
 public:
  MaskedModel(RadialWeight base, std::vector<std::pair<Radius, Radius>> iv, std::string desc)
    : base_(std::move(base)), iv_(std::move(iv)), desc_(std::move(desc)) {
    std::sort(iv_.begin(), iv_.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }

  double log_density(const Radius& r) const override {
    for (const auto& [a, b] : iv_) {
      if (r < a) return kNegInf;
      if (!(b < r)) return base_.log_eval(r);
    }
    return kNegInf;
  }

  std::optional<DeepLog> closed_log_tail(const Radius& r) const override {
    DeepLog sum = DeepLog::zero();
    // farthest intervals first so the shallow terms are added last
    for (auto it = iv_.rbegin(); it != iv_.rend(); ++it) {
      const auto& [a, b] = *it;
      if (!(r < b)) break;
      const Radius lo = r < a ? a : r;
      sum = sum + (tail_deep(base_, lo) - tail_deep(base_, b));
    }
    return sum;
  }

  std::optional<double> closed_log_moment(double x) const override {
    double acc = kNegInf;
    for (const auto& [a, b] : iv_) acc = log_add(acc, segment_moment(base_, x, a, b, 1e-12));
    return acc;
  }

  std::optional<double> closed_log_segment(double x, const Radius& lo, const Radius& hi) const override {
    double acc = kNegInf;
    for (const auto& [a, b] : iv_) {
      const Radius s = a < lo ? lo : a;
      const Radius e = hi < b ? hi : b;
      if (s < e) acc = log_add(acc, segment_moment(base_, x, s, e, 1e-12));
    }
    return acc;
  }

  std::vector<double> breakpoints_t() const override {
    std::vector<double> out;
    for (const auto& [a, b] : iv_) {
      out.push_back(a.t());
      out.push_back(b.t());
    }
    return out;
  }

  std::vector<std::pair<Radius, Radius>> zero_intervals() const override {
    std::vector<std::pair<Radius, Radius>> out;
    Radius prev = Radius::from_r(0.0);
    for (const auto& [a, b] : iv_) {
      if (prev < a) out.emplace_back(prev, a);
      prev = b;
    }
    return out;
  }

  std::string descriptor() const override { return desc_; }

 private:
  RadialWeight base_;
  std::vector<std::pair<Radius, Radius>> iv_;
  std::string desc_;
};

class SigmaModel final : public WeightModel {
 public:
  SigmaModel(RadialWeight omega, RadialWeight nu, double p) : omega_(std::move(omega)), nu_(std::move(nu)), p_(p) {}

  double log_density(const Radius& r) const override {
    const double lo = omega_.log_eval(r);
    if (lo == kNegInf || r.r() == 0.0) return kNegInf;
    const double ln = nu_.log_eval(r);
    if (ln == kNegInf) return kInf;
    const double pp = p_ / (p_ - 1.0);
    return r.log_r() + pp * (lo - ln / p_);
  }

  std::vector<double> breakpoints_t() const override {
    auto a = omega_.model().breakpoints_t();
    auto b = nu_.model().breakpoints_t();
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  std::string descriptor() const override {
    return "sigma(" + omega_.descriptor() + ";" + nu_.descriptor() + ";p=" + fmt_param(p_) + ")";
  }

 private:
  RadialWeight omega_, nu_;
  double p_;
};

// ---- DSL parsing ----

class Cursor {
 public:
  explicit Cursor(const std::string& s, std::size_t offset = 0) : s_(s), pos_(offset) {}

  void expect(const std::string& lit) {
    if (s_.compare(pos_, lit.size(), lit) != 0) throw ParseError("expected '" + lit + "'", pos_);
    pos_ += lit.size();
  }

  bool consume(const std::string& lit) {
    if (s_.compare(pos_, lit.size(), lit) != 0) return false;
    pos_ += lit.size();
    return true;
  }

  double number() {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) throw ParseError("expected a number", pos_);
    pos_ += static_cast<std::size_t>(ptr - first);
    if (!std::isfinite(v)) throw ParseError("number must be finite", pos_);
    return v;
  }

  void end() const {
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
  }

  std::size_t pos() const { return pos_; }
  std::string rest() const { return s_.substr(pos_); }

 private:
  const std::string& s_;
  std::size_t pos_;
};

RadialWeight load_table(const std::string& path, const std::string& desc) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open table file '" + path + "'");
  std::vector<double> r, w;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("table line " + std::to_string(lineno) + " has no comma");
    double a = 0.0, b = 0.0;
    const auto ra = std::from_chars(line.data(), line.data() + comma, a);
    std::string second = line.substr(comma + 1);
    while (!second.empty() && (second.back() == '\r' || second.back() == ' ')) second.pop_back();
    const auto rb = std::from_chars(second.data(), second.data() + second.size(), b);
    if (ra.ec != std::errc() || rb.ec != std::errc()) {
      if (r.empty() && lineno == 1) continue;  // header row
      throw DomainError("table line " + std::to_string(lineno) + " is not numeric");
    }
    r.push_back(a);
    w.push_back(b);
  }
  return table_weight(std::move(r), std::move(w), desc);
}

}  // namespace

// Integral of exp(log_g(r)) dr over r in [r(t_lo), r(t_hi)], taken in t = -log(1-r).
// t_hi = kMaxT means up to the boundary.
RadialIntegral radial_integral(const std::function<double(const Radius&)>& log_g, double t_lo, double t_hi,
                             const std::vector<double>& model_breaks, double tol) {
  auto f = [&](double t) {
    const double g = log_g(Radius::from_t(t));
    return g == kNegInf ? kNegInf : g - t;
  };
  std::vector<double> breaks = model_breaks;
  for (int j = 1; j <= 60; ++j) breaks.push_back(j * kLn2);
  LogIntegrateOptions opt;
  opt.tol = tol * 0.5;

  double v1 = kNegInf, e1 = 0.0;
  const double mid = std::min(t_hi, std::max(t_lo, kDyadicT));
  if (mid > t_lo) {
    auto r = log_integrate(f, t_lo, mid, breaks, kLn2, opt);
    v1 = r.log_value;
    e1 = r.rel_error;
  }
  double v2 = kNegInf, e2 = 0.0;
  bool truncated = false;
  if (t_hi > mid) {
    if (t_hi >= kMaxT) {
      auto r = log_integrate_to_inf(f, mid, breaks, kMaxT, opt);
      v2 = r.log_value;
      e2 = r.rel_error;
      // Integrand still significant at the cutoff: not integrable as far as we can tell.
      if (v2 != kNegInf) {
        const double edge = f(kMaxT);
        const double total = log_add(v1, v2);
        truncated = edge != kNegInf && edge + 10.0 > total + std::log(tol);
      }
    } else {
      auto r = log_integrate(f, mid, t_hi, breaks, 8.0, opt);
      v2 = r.log_value;
      e2 = r.rel_error;
    }
  }
  const double total = log_add(v1, v2);
  double err = 0.0;
  if (total != kNegInf) {
    if (v1 != kNegInf) err += e1 * std::exp(v1 - total);
    if (v2 != kNegInf) err += e2 * std::exp(v2 - total);
  }
  return {total, err, truncated};
}


RadialWeight pow_weight(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw DomainError("pow weight needs alpha > -1 (not integrable otherwise)");
  return RadialWeight(std::make_shared<PowModel>(alpha, "pow:alpha=" + fmt_param(alpha)));
}

RadialWeight std_weight(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw DomainError("std weight needs alpha > -1");
  return RadialWeight(std::make_shared<StdModel>(alpha, "std:alpha=" + fmt_param(alpha)));
}

RadialWeight exp_weight(double c, double beta) {
  if (!(c > 0.0) || !(beta > 0.0)) throw DomainError("exp weight needs c > 0 and beta > 0");
  return RadialWeight(std::make_shared<ExpModel>(c, beta, "exp:c=" + fmt_param(c) + ",beta=" + fmt_param(beta)));
}

RadialWeight dblexp_weight() { return RadialWeight(std::make_shared<DblExpModel>()); }

RadialWeight table_weight(std::vector<double> r, std::vector<double> omega, std::string source) {
  if (r.empty() || r.size() != omega.size()) throw DomainError("table needs matching nonempty r and omega columns");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0 && r[i] < 1.0)) throw DomainError("table radius outside [0,1)");
    if (!(omega[i] >= 0.0) || !std::isfinite(omega[i])) throw DomainError("table weight must be finite and nonnegative");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("table radii must be strictly increasing");
  }
  if (!(omega.back() > 0.0)) throw DomainError("last table sample must be positive (tail would vanish)");
  return RadialWeight(std::make_shared<TableModel>(std::move(r), std::move(omega), "table:" + source));
}

RadialWeight masked_weight(const RadialWeight& base, std::vector<std::pair<Radius, Radius>> intervals,
                           std::string descriptor, std::shared_ptr<const ConstructInfo> info) {
  if (intervals.empty()) throw DomainError("masked weight needs at least one interval");
  if (!base.has_closed_tail()) throw DomainError("masked weight needs a base with a closed tail");
  for (const auto& [a, b] : intervals) {
    if (!(a < b)) throw DomainError("masked interval must have a < b");
  }
  return RadialWeight(std::make_shared<MaskedModel>(base, std::move(intervals), std::move(descriptor)),
                      std::move(info));
}

RadialWeight sigma_weight(const RadialWeight& omega, const RadialWeight& nu, double p) {
  if (!(p > 1.0)) throw DomainError("sigma needs p > 1");
  return RadialWeight(std::make_shared<SigmaModel>(omega, nu, p));
}

RadialWeight parse_weight(const std::string& dsl) {
  Cursor c(dsl);
  if (c.consume("pow:alpha=")) {
    const double a = c.number();
    c.end();
    if (!(a > -1.0)) throw DomainError("pow weight needs alpha > -1 (not integrable otherwise)");
    return RadialWeight(std::make_shared<PowModel>(a, dsl));
  }
  if (c.consume("std:alpha=")) {
    const double a = c.number();
    c.end();
    if (!(a > -1.0)) throw DomainError("std weight needs alpha > -1");
    return RadialWeight(std::make_shared<StdModel>(a, dsl));
  }
  if (c.consume("exp:c=")) {
    const double cc = c.number();
    c.expect(",beta=");
    const double b = c.number();
    c.end();
    if (!(cc > 0.0) || !(b > 0.0)) throw DomainError("exp weight needs c > 0 and beta > 0");
    return RadialWeight(std::make_shared<ExpModel>(cc, b, dsl));
  }
  if (c.consume("dblexp")) {
    c.end();
    return dblexp_weight();
  }
  if (c.consume("table:")) {
    const std::string path = c.rest();
    if (path.empty()) throw ParseError("expected a table path", c.pos());
    return load_table(path, path);
  }
  if (c.consume("construct:")) {
    return parse_construct(dsl, c.pos());
  }
  throw ParseError("unknown weight family", 0);
}

double tail_by_quadrature(const WeightModel& m, const Radius& r, double tol) {
  auto res = radial_integral([&m](const Radius& s) { return m.log_density(s); }, r.t(), kMaxT, m.breakpoints_t(), tol);
  if (res.truncated) return kInf;
  if (!within_tol(res, tol)) throw AccuracyError("tail quadrature above tolerance", res.log_value, res.rel_error);
  return res.log_value;
}

double moment_by_quadrature(const WeightModel& m, double x, double tol) {
  auto g = [&m, x](const Radius& s) {
    const double d = m.log_density(s);
    if (d == kNegInf || x == 0.0) return d;
    return s.r() == 0.0 ? kNegInf : d + x * s.log_r();
  };
  auto res = radial_integral(g, 0.0, kMaxT, m.breakpoints_t(), tol);
  if (res.truncated) return kInf;
  if (!within_tol(res, tol)) throw AccuracyError("moment quadrature above tolerance", res.log_value, res.rel_error);
  return res.log_value;
}

double segment_by_quadrature(const WeightModel& m, double x, const Radius& a, const Radius& b, double tol) {
  auto g = [&m, x](const Radius& s) {
    const double d = m.log_density(s);
    if (d == kNegInf || x == 0.0) return d;
    return s.r() == 0.0 ? kNegInf : d + x * s.log_r();
  };
  if (x * b.gap() > 16.0) {
    // r^x is a spike at b far narrower than t resolves there. With
    // v = x(log b - log r) it becomes e^-v on [0, x log(b/a)].
    const double lam_b = -b.log_r();
    const double lam_a = a.r() == 0.0 ? kInf : -a.log_r();
    const double v_max = std::min(x * (lam_a - lam_b), 1e300);
    auto f = [&m, x, lam_b](double v) {
      const double lam = lam_b + v / x;
      const double d = m.log_density(Radius::from_gap(-std::expm1(-lam)));
      return d == kNegInf ? kNegInf : d - v - lam;
    };
    std::vector<double> breaks;
    for (double t : m.breakpoints_t()) {
      const double v = x * (-std::log1p(-std::exp(-t)) - lam_b);
      if (v > 0.0 && v < v_max) breaks.push_back(v);
    }
    LogIntegrateOptions opt;
    opt.tol = tol * 0.5;
    const auto r = log_integrate_to_inf(f, 0.0, breaks, v_max, opt);
    const RadialIntegral res{-x * lam_b - std::log(x) + r.log_value, r.rel_error, false};
    if (!within_tol(res, tol)) throw AccuracyError("segment quadrature above tolerance", res.log_value, res.rel_error);
    return res.log_value;
  }
  auto res = radial_integral(g, a.t(), std::min(b.t(), kMaxT - 1e-9), m.breakpoints_t(), tol);
  if (!within_tol(res, tol)) throw AccuracyError("segment quadrature above tolerance", res.log_value, res.rel_error);
  return res.log_value;
}

DeepLog tail_deep(const RadialWeight& w, const Radius& r, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (auto c = w.model().closed_log_tail(r)) return *c;
  return DeepLog::from_log(tail_by_quadrature(w.model(), r, tol));
}

double tail(const RadialWeight& w, const Radius& r, double tol) { return tail_deep(w, r, tol).log(); }

double tail(const RadialWeight& w, double r, double tol) { return tail(w, Radius::from_r(r), tol); }

double moment(const RadialWeight& w, double x, double tol) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("moment order must be finite and >= 0");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (auto hit = w.cache().find(x, tol)) return *hit;
  double v;
  if (auto c = w.model().closed_log_moment(x)) {
    v = *c;
  } else {
    v = moment_by_quadrature(w.model(), x, tol);
  }
  w.cache().insert(x, tol, v);
  return v;
}

double segment_moment(const RadialWeight& w, double x, const Radius& a, const Radius& b, double tol) {
  if (!(x >= 0.0)) throw DomainError("moment order must be >= 0");
  if (!(a < b)) return kNegInf;
  if (auto c = w.model().closed_log_segment(x, a, b)) return *c;
  return segment_by_quadrature(w.model(), x, a, b, tol);
}

RadialWeight modified_weight(const RadialWeight& w, double beta, ModKind kind) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("modifier exponent must be >= 0");
  if (beta == 0.0) return w;
  if (kind == ModKind::bracket) {
    if (auto* pm = dynamic_cast<const PowModel*>(w.model_ptr().get())) {
      return RadialWeight(std::make_shared<PowModel>(pm->alpha() + beta, w.descriptor() + "|bracket:" + fmt_param(beta)));
    }
    return RadialWeight(std::make_shared<BracketModel>(w, beta));
  }
  return RadialWeight(std::make_shared<ParenModel>(w, beta));
}

double omega_star(const RadialWeight& w, double r, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("omega_star needs 0 < r < 1");
  const Radius rr = Radius::from_r(r);
  const WeightModel& m = w.model();
  auto g = [&](const Radius& s) {
    const double d = m.log_density(s);
    if (d == kNegInf) return d;
    // log(s/r) = log1p((s - r)/r), with s - r = gap(r) - gap(s)
    const double q = std::log1p((rr.gap() - s.gap()) / r);
    if (!(q > 0.0)) return kNegInf;
    return std::log(q) + d + s.log_r();
  };
  auto res = radial_integral(g, rr.t(), kMaxT, m.breakpoints_t(), tol);
  if (!within_tol(res, tol)) throw AccuracyError("omega_star quadrature above tolerance", std::exp(res.log_value), res.rel_error);
  return std::exp(res.log_value);
}

}  // namespace bergman
