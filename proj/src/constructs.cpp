#include "bergman/constructs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>

#include "bergman/classify.hpp"
#include "bergman/errors.hpp"
#include "bergman/format.hpp"

namespace bergman {

namespace {

constexpr double kLn2 = 0.6931471805599453;
// keep every r_x gap a normal double
constexpr double kMinLog2Gap = -1022.0;
constexpr int kProp9First = 2;
constexpr int kProp9Last = 9;  // last interval is [s_9, t_10], t_10 gap 2^-1024

// r_x = 1 - 2^(-x psi(x)), handled through log2 of the gap.
struct Ladder {
  std::function<double(double)> psi;
  double log2_gap(double x) const { return x == 0.0 ? 0.0 : -x * psi(x); }
  Radius at(double x) const { return Radius::from_gap(std::exp2(log2_gap(x))); }
  // largest j with r_{2j+2} representable
  int last_j() const {
    int j = 0;
    while (log2_gap(2.0 * (j + 1) + 2.0) >= kMinLog2Gap && j < 100000) ++j;
    return j;
  }
  double inverse(double y) const {
    double lo = 1.0, hi = 2.0;
    if (psi(lo) >= y) return lo;
    while (psi(hi) < y) {
      hi *= 2.0;
      if (hi > 1e18) throw DomainError("psi does not reach the required level");
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (psi(mid) < y ? lo : hi) = mid;
    }
    return hi;
  }
};

// Smallest K = 2^m > 4 with tail(t) <= tail(1 - K(1-t)) / 2 for t >= 1 - 1/K.
double halving_K(const RadialWeight& base) {
  for (int m = 3; m <= 30; ++m) {
    const double K = std::ldexp(1.0, m);
    bool ok = true;
    for (int k = 0; k <= 40 && ok; ++k) {
      const Radius t = Radius::from_gap(std::ldexp(1.0, -k - m));
      const Radius s = Radius::from_gap(std::ldexp(1.0, -k));
      if (log_ratio(tail_deep(base, t), tail_deep(base, s)) > -kLn2) ok = false;
    }
    if (ok) return K;
  }
  throw DomainError("base weight tail never halves; it is not in D-check");
}

// Smallest N passing the start-index inequalities on the representable range.
int choose_N(const Ladder& L, double beta, double K, double M, int J) {
  const double n_min = 0.5 * (L.inverse(std::log2(K)) - 1.0);
  for (int N = std::max(1, static_cast<int>(std::ceil(n_min))); N + 1 < J; ++N) {
    bool ok = true;
    // beta log u <= u / (2M), u = (1 - r_{2k}) / (1 - r_{2j+1}), N <= k <= j-1
    for (int j = N + 1; j <= J && ok; ++j) {
      for (int k = N; k <= j - 1 && ok; ++k) {
        const double log_u = kLn2 * (L.log2_gap(2.0 * k) - L.log2_gap(2.0 * j + 1.0));
        const double lhs = beta * log_u;
        if (lhs > 0.0 && std::log(lhs * 2.0 * M) > log_u) ok = false;
      }
    }
    const double r2N = L.at(2.0 * N).r();
    const double bound = 1.0 / (4.0 * (1.0 / r2N + beta));
    for (int j = N + 1; j <= J && ok; ++j) {
      if (std::exp2(L.log2_gap(2.0 * j) - L.log2_gap(2.0 * j - 2.0)) > bound) ok = false;
    }
    if (ok) return N;
  }
  throw DomainError("no start index N satisfies the construction inequalities on the representable range");
}

std::vector<double> ladder_gaps(const Ladder& L, int J) {
  std::vector<double> g;
  for (int x = 0; x <= 2 * J + 2; ++x) g.push_back(std::exp2(L.log2_gap(x)));
  return g;
}

struct IntervalBuild {
  std::vector<std::pair<Radius, Radius>> intervals;
  std::shared_ptr<ConstructInfo> info;
};

IntervalBuild ladder_intervals(const Ladder& L, int N, int J) {
  IntervalBuild b;
  b.info = std::make_shared<ConstructInfo>();
  for (int j = N; j <= J; ++j) {
    const Radius lo = L.at(2.0 * j + 1.0);
    const Radius hi = L.at(2.0 * j + 2.0);
    // the next rung is past double range: keep the last interval up to the
    // boundary so the tail stays positive at every representable radius
    b.intervals.emplace_back(lo, j == J ? Radius::from_gap(std::numeric_limits<double>::denorm_min()) : hi);
    // one step in j already spans many octaves in 1 - r; witnesses sit at
    // dyadic j so the verdict window sees dyadic scales of the index
    if ((j & (j - 1)) != 0) continue;
    b.info->dcheck_scales.push_back(lo);
    // nothing of W lies below r_{2N+1}
    if (j > N) b.info->cond10_scales.push_back(lo);
    // 1 - 2(1 - r_{2j+2}) sits inside [r_{2j+1}, r_{2j+2}] and doubles onto
    // r_{2j+2}; the last interval has nothing beyond it
    const double g = 2.0 * hi.gap();
    if (g < lo.gap() && j < J) b.info->dhat_scales.push_back(Radius::from_gap(g));
  }
  b.info->x_gaps = ladder_gaps(L, J);
  b.info->params["N"] = N;
  b.info->params["J"] = J;
  b.info->range = "j=" + std::to_string(N) + ".." + std::to_string(J) + " (1 - r_" + std::to_string(2 * J + 2) +
                  " = 2^" + format_double_short(std::round(L.log2_gap(2.0 * J + 2.0))) + ")";
  return b;
}

// -d log phi / d tau with tau = -log(1-t); bounded iff (1-t)|phi'/phi| is.
std::function<double(double)> phi_log(const PhiSpec& phi, double beta, double& A_out) {
  if (phi.family == "power") {
    const double A = phi.param > 0.0 ? phi.param : 2.0 * beta;
    if (!(A > 0.0) || !std::isfinite(A)) throw DomainError("phi=power needs a positive exponent");
    A_out = A;
    return [A](double tau) { return A * (-tau - kLn2); };
  }
  if (phi.family == "log") {
    return [](double tau) { return -std::log(2.0 + tau); };
  }
  if (phi.family == "exp") {
    const double c = phi.param;
    if (!(c > 0.0)) throw DomainError("phi=exp needs c > 0");
    return [c](double tau) { return tau > 700.0 ? kNegInf : -c * std::exp(tau); };
  }
  throw DomainError("unknown phi family '" + phi.family + "'");
}

void validate_phi(const std::function<double(double)>& lphi) {
  const double h = 1e-3;
  auto rate = [&](double tau) { return -(lphi(tau + h) - lphi(std::max(0.0, tau - h))) / (tau + h - std::max(0.0, tau - h)); };
  const double r0 = std::max(1.0, std::abs(rate(0.0)));
  for (double tau = 0.0; tau <= 690.0; tau += 0.25) {
    const double v = rate(tau);
    if (v < -1e-9) {
      throw DomainError("phi is not decreasing at t = " + format_double_short(-std::expm1(-tau)));
    }
    if (!(v <= 100.0 * r0)) {
      throw DomainError("phi violates (1-t)|phi'/phi| bounded at t = " + format_double_short(-std::expm1(-tau)));
    }
  }
  if (!(lphi(690.0) < lphi(0.0) - 1.0)) throw DomainError("phi does not decrease to zero");
}

std::string phi_text(const PhiSpec& phi, double A) {
  if (phi.family == "power") return "power:" + format_double_short(A);
  if (phi.family == "exp") return "exp:" + format_double_short(phi.param);
  return phi.family;
}

RadialWeight finish(const RadialWeight& base, IntervalBuild b, const std::string& desc) {
  std::shared_ptr<const ConstructInfo> info = b.info;
  return masked_weight(base, std::move(b.intervals), desc, info);
}

// key=value pairs separated by commas; values may contain ':'.
std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> split_params(const std::string& s,
                                                                                    std::size_t offset) {
  std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    const std::size_t end = std::min(s.find(',', i), s.size());
    const std::string item = s.substr(i, end - i);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value", offset + i);
    out.push_back({item.substr(0, eq), {item.substr(eq + 1), offset + i + eq + 1}});
    i = end + 1;
  }
  return out;
}

double parse_num(const std::string& v, std::size_t pos) {
  double d = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) throw ParseError("expected a number", pos);
  return d;
}

int parse_int(const std::string& v, std::size_t pos) {
  int d = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) throw ParseError("expected an integer", pos);
  return d;
}

}  // namespace

double prop9_t_gap(int n) {
  if (n < 1 || n > 10) throw DomainError("t_n is representable for 1 <= n <= 10 only");
  return std::ldexp(1.0, -(1 << n));
}

double prop9_s_gap(int n) {
  if (n < 1 || n > 9) throw DomainError("s_n is representable for 1 <= n <= 9 only");
  return std::ldexp(1.0 / n, -(1 << n));
}

RadialWeight build_prop9_weight() {
  auto info = std::make_shared<ConstructInfo>();
  info->which = "prop9";
  std::vector<std::pair<Radius, Radius>> iv;
  for (int n = kProp9First; n <= kProp9Last; ++n) {
    iv.emplace_back(Radius::from_gap(prop9_s_gap(n)), Radius::from_gap(prop9_t_gap(n + 1)));
  }
  for (int n = kProp9First; n <= kProp9Last; ++n) {
    const Radius t = Radius::from_gap(prop9_t_gap(n));
    info->dcheck_scales.push_back(t);
    info->dhat_scales.push_back(t);
    // W has no mass below s_2, so condition (10) starts at t_3
    if (n > kProp9First) {
      info->cond10_scales.push_back(t);
      info->cond10_scales.push_back(Radius::from_gap(prop9_s_gap(n)));
    }
  }
  std::sort(info->cond10_scales.begin(), info->cond10_scales.end());
  info->params["N"] = kProp9First;
  info->m_K = std::ldexp(1.0, kProp9First + 2);
  info->range = "n=" + std::to_string(kProp9First) + ".." + std::to_string(kProp9Last) +
                " (t_10 has gap 2^-1024; the weight is cut there)";
  return masked_weight(dblexp_weight(), std::move(iv), "construct:prop9", info);
}

RadialWeight build_thm10_weight(const RadialWeight& base, const PhiSpec& phi, int N) {
  const ClassReport dh = doubling_profile(base);
  const ClassReport dc = reverse_doubling_profile(base, 2.0);
  if (dh.verdict != Verdict::holds || dc.verdict != Verdict::holds) {
    throw DomainError("thm10 needs a base weight in D-hat and D-check; got " + to_string(dh.verdict) + "/" +
                      to_string(dc.verdict) + " for " + base.descriptor());
  }
  const double beta = dc.params.at("beta_fit");
  if (!(beta > 0.0)) throw DomainError("could not fit a tail exponent for the base weight");
  double A = 0.0;
  const auto lphi = phi_log(phi, beta, A);
  validate_phi(lphi);
  Ladder L;
  L.psi = [lphi, beta](double x) { return -lphi(std::log(x)) / (2.0 * beta * kLn2); };
  const double K = halving_K(base);
  const int J = L.last_j();
  const double M = 2.0;
  if (N < 0) N = choose_N(L, beta, K, M, J);
  if (N < 1 || N >= J) throw DomainError("thm10 start index out of range");
  IntervalBuild b = ladder_intervals(L, N, J);
  b.info->which = "thm10";
  b.info->params["beta"] = beta;
  b.info->params["K"] = K;
  b.info->params["M"] = M;
  if (A > 0.0) b.info->params["A"] = A;
  b.info->m_K = 2.0;
  const std::string desc =
      "construct:thm10:base=" + base.descriptor() + ",phi=" + phi_text(phi, A) + ",N=" + std::to_string(N);
  return finish(base, std::move(b), desc);
}

RadialWeight build_thm10_weight(const Thm10Params& p) {
  RadialWeight base;
  if (p.base == "pow") {
    if (!(p.alpha > -1.0)) throw DomainError("pow base needs alpha > -1");
    base = pow_weight(p.alpha);
  } else if (p.base == "std") {
    if (!(p.alpha > -1.0)) throw DomainError("std base needs alpha > -1");
    base = std_weight(p.alpha);
  } else {
    throw DomainError("thm10 base must be pow or std");
  }
  return build_thm10_weight(base, p.phi, p.N);
}

RadialWeight build_prop12_weight(const Prop12Params& p) {
  const double c = p.c;
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("prop12 needs psi = c log2(1+x) with c > 0");
  Ladder L;
  L.psi = [c](double x) { return c * std::log2(1.0 + x); };
  // psi(x+1) - psi(x) <= C2/x on a grid
  double worst = 0.0;
  for (double x = 1.0; x < 1e12; x *= 1.5) worst = std::max(worst, x * (L.psi(x + 1.0) - L.psi(x)));
  if (!(worst < 1e6)) throw DomainError("psi increments are not O(1/x)");
  const RadialWeight base = pow_weight(0.0);
  const double beta = 1.0;
  const double K = 8.0;
  const int J = L.last_j();
  int N = p.N;
  if (N < 0) N = choose_N(L, beta, K, 2.0, J);
  if (N < 1 || N >= J) throw DomainError("prop12 start index out of range");
  IntervalBuild b = ladder_intervals(L, N, J);
  b.info->which = "prop12";
  b.info->params["c"] = c;
  b.info->params["beta"] = beta;
  b.info->params["K"] = K;
  b.info->m_K = 2.0;
  const std::string desc = "construct:prop12:c=" + format_double_short(c) + ",N=" + std::to_string(N);
  return finish(base, std::move(b), desc);
}

RadialWeight parse_construct(const std::string& dsl, std::size_t offset) {
  const std::string rest = dsl.substr(offset);
  if (rest == "prop9") return build_prop9_weight();
  auto params_of = [&](const std::string& head) -> std::optional<std::string> {
    if (rest == head) return std::string();
    if (rest.rfind(head + ":", 0) == 0) return rest.substr(head.size() + 1);
    return std::nullopt;
  };
  if (auto ps = params_of("thm10")) {
    Thm10Params p;
    if (!ps->empty()) {
      for (const auto& [key, val] : split_params(*ps, offset + 6)) {
        const auto& [v, pos] = val;
        if (key == "base") {
          p.base = v;
        } else if (key == "alpha") {
          p.alpha = parse_num(v, pos);
        } else if (key == "N") {
          p.N = parse_int(v, pos);
        } else if (key == "phi") {
          const std::size_t colon = v.find(':');
          p.phi.family = v.substr(0, colon);
          if (colon != std::string::npos) p.phi.param = parse_num(v.substr(colon + 1), pos + colon + 1);
        } else {
          throw ParseError("unknown thm10 parameter '" + key + "'", pos - key.size() - 1);
        }
      }
    }
    return build_thm10_weight(p);
  }
  if (auto ps = params_of("prop12")) {
    Prop12Params p;
    if (!ps->empty()) {
      for (const auto& [key, val] : split_params(*ps, offset + 7)) {
        const auto& [v, pos] = val;
        if (key == "c") {
          p.c = parse_num(v, pos);
        } else if (key == "N") {
          p.N = parse_int(v, pos);
        } else {
          throw ParseError("unknown prop12 parameter '" + key + "'", pos - key.size() - 1);
        }
      }
    }
    return build_prop12_weight(p);
  }
  throw ParseError("unknown construction (expected prop9, thm10 or prop12)", offset);
}

std::vector<TableRow> construct_table(const RadialWeight& w, int points_per_octave, int octaves) {
  if (points_per_octave < 1 || octaves < 1) throw DomainError("table grid needs positive sizes");
  std::vector<TableRow> rows;
  const int n = points_per_octave * octaves;
  for (int k = 0; k <= n; ++k) {
    const Radius r = Radius::from_gap(std::exp2(-static_cast<double>(k) / points_per_octave));
    rows.push_back({r.r(), std::exp(w.log_eval(r)), tail(w, r)});
  }
  return rows;
}

}  // namespace bergman
