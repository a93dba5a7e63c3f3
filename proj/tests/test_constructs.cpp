#include <gtest/gtest.h>

#include <cmath>

#include "bergman/classify.hpp"
#include "bergman/constructs.hpp"

using namespace bergman;

TEST(Prop9, Scales) {
  EXPECT_EQ(1.0 - prop9_t_gap(1), 0.75);
  EXPECT_EQ(1.0 - prop9_t_gap(2), 0.9375);
  EXPECT_EQ(prop9_s_gap(2), 1.0 / 32.0);
  EXPECT_THROW(prop9_t_gap(11), DomainError);
}

TEST(Prop9, TailFlatAcrossGaps) {
  // W vanishes on (t_n, s_n), and s_n sits below 1 - (1 - t_n)/2, so the tails agree
  const RadialWeight w = build_prop9_weight();
  for (int n = 2; n <= 9; ++n) {
    const Radius t = Radius::from_gap(prop9_t_gap(n));
    const Radius h = Radius::from_gap(prop9_t_gap(n) / 2.0);
    EXPECT_EQ(tail_deep(w, t), tail_deep(w, h)) << n;
  }
}

TEST(Prop9, TailMatchesDblexpOnRetainedIntervals) {
  // below t_3 the only retained piece is [s_2, t_3]: W^(r) = dblexp^(max(r, s_2)) - dblexp^(t_3) + W^(t_3)
  const RadialWeight w = build_prop9_weight();
  const RadialWeight d = dblexp_weight();
  for (double r : {0.0, 0.5, 0.9}) EXPECT_EQ(tail(w, r), tail(d, Radius::from_gap(prop9_s_gap(2)))) << r;
  EXPECT_EQ(w.log_eval(Radius::from_r(0.95)), kNegInf);
  // exp(-e^40) scale: only the log is finite
  EXPECT_GT(w.log_eval(Radius::from_r(0.975)), kNegInf);
}

TEST(Prop9, Memberships) {
  const RadialWeight w = build_prop9_weight();
  EXPECT_EQ(reverse_doubling_profile(w, 2.0, default_radial_grid(w, ClassName::Dcheck)).verdict, Verdict::diverges);
  EXPECT_EQ(m_class_profile(w, w.construct()->m_K).verdict, Verdict::holds);
  EXPECT_FALSE(w.construct()->range.empty());
}

TEST(Thm10, SandwichAgainstBase) {
  Thm10Params p;
  const RadialWeight w = build_thm10_weight(p);
  const RadialWeight base = pow_weight(1.0);
  const double A = w.construct()->params.at("A");
  // log(W^ / (w^ phi)) with phi = ((1-t)/2)^A: its infimum sits near r = 0 (no
  // mass of W below r_{2N+1}) and must not decay towards the boundary
  double lo_inner = 1e300, lo_outer = 1e300;
  for (int j = 0; j <= 1000; ++j) {
    const Radius r = Radius::from_gap(std::ldexp(1.0, -j));
    const double tw = tail(w, r), tb = tail(base, r);
    EXPECT_LE(tw, tb + 1e-12) << j;
    const double v = tw - tb - A * std::log(r.gap() / 2.0);
    (j < 20 ? lo_inner : lo_outer) = std::min(j < 20 ? lo_inner : lo_outer, v);
  }
  EXPECT_TRUE(std::isfinite(lo_inner));
  EXPECT_GE(lo_outer, lo_inner);
}

TEST(Thm10, Memberships) {
  const RadialWeight w = parse_weight("construct:thm10");
  EXPECT_EQ(doubling_profile(w, default_radial_grid(w, ClassName::Dhat)).verdict, Verdict::diverges);
  EXPECT_EQ(m_class_profile(w, w.construct()->m_K).verdict, Verdict::diverges);
  EXPECT_EQ(cond10_profile(w, 2.0, default_radial_grid(w, ClassName::Cond10)).verdict, Verdict::diverges);
}

TEST(Thm10, RejectsFastPhi) {
  Thm10Params p;
  p.phi = {"exp", 1.0};
  EXPECT_THROW(build_thm10_weight(p), DomainError);
  // 1/(2 + log(1/(1-t))) is admissible but psi = log2(2 + log x)/(2 beta) only reaches
  // log2 K near x = e^(2^(2 beta log2 K)), far past double range
  Thm10Params q;
  q.phi = {"log", 0.0};
  EXPECT_THROW(build_thm10_weight(q), DomainError);
}

TEST(Prop12, LadderPoints) {
  const RadialWeight w = build_prop12_weight();
  const auto& g = w.construct()->x_gaps;
  ASSERT_GT(g.size(), 3u);
  EXPECT_NEAR(g[2], 1.0 / 9.0, 1e-15);
  for (std::size_t x = 1; x < std::min<std::size_t>(g.size(), 40); ++x)
    EXPECT_NEAR(std::log2(g[x]), -double(x) * std::log2(1.0 + x), 1e-9 * x * x);
}

TEST(Prop12, ExactMomentsAgainstQuadrature) {
  const RadialWeight w = build_prop12_weight();
  const auto& g = w.construct()->x_gaps;
  for (double x : {0.0, 1.0, 10.0, 1e3, 1e5}) {
    // segment by segment, so quadrature sees each retained interval whole
    const double closed = moment(w, x);
    double acc = kNegInf;
    std::size_t j = static_cast<std::size_t>(w.construct()->params.at("N"));
    for (; 2 * j + 2 < g.size(); ++j) {
      const Radius lo = Radius::from_gap(g[2 * j + 1]), hi = Radius::from_gap(g[2 * j + 2]);
      acc = log_add(acc, segment_by_quadrature(w.model(), x, lo, hi, 1e-12));
    }
    EXPECT_NEAR(acc, closed, 1e-9 * std::max(1.0, std::abs(closed))) << x;
  }
}

TEST(Prop12, MomentAsymptotics) {
  // W_x comparable with r_{2j}^x / x + (1 - r_{2j+1}) at x = 1/(1 - r_{2j+1})
  const RadialWeight w = build_prop12_weight();
  const auto& g = w.construct()->x_gaps;
  double lo = 1e300, hi = 0.0;
  for (std::size_t j = static_cast<std::size_t>(w.construct()->params.at("N")); 2 * j + 1 < g.size() && j < 14; ++j) {
    const double x = 1.0 / g[2 * j + 1];
    const double model = std::exp(x * std::log1p(-g[2 * j])) / x + g[2 * j + 1];
    const double q = std::exp(moment(w, x)) / model;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  EXPECT_GT(lo, 0.05);
  EXPECT_LT(hi, 20.0);
}

TEST(Prop12, DostanicTrendIncreases) {
  Prop12Params p;
  p.c = 2.0;
  const RadialWeight w = build_prop12_weight(p);
  const ClassReport r = dostanic_profile(w, 1.5, default_dostanic_ns(w, 1.5));
  ASSERT_GE(r.grid.size(), 4u);
  for (std::size_t i = r.grid.size() - 4; i + 1 < r.grid.size(); ++i)
    EXPECT_GT(r.grid[i + 1].log_ratio, r.grid[i].log_ratio);
}

TEST(AllConstructs, PositiveTailsEverywhere) {
  for (const char* d : {"construct:prop9", "construct:thm10", "construct:prop12", "construct:prop12:c=3",
                        "construct:thm10:base=std,alpha=2"}) {
    const RadialWeight w = parse_weight(d);
    for (int j = 0; j <= 1000; j += 13) EXPECT_FALSE(tail_deep(w, Radius::from_gap(std::ldexp(1.0, -j))).is_zero())
        << d << " j=" << j;
  }
}

TEST(AllConstructs, ParamsGrammar) {
  EXPECT_THROW(parse_weight("construct:prop7"), ParseError);
  EXPECT_THROW(parse_weight("construct:prop12:c"), ParseError);
  EXPECT_THROW(parse_weight("construct:prop12:q=1"), ParseError);
  EXPECT_THROW(parse_weight("construct:prop12:N=x"), ParseError);
  EXPECT_THROW(parse_weight("construct:prop12:c=-1"), DomainError);
  EXPECT_THROW(parse_weight("construct:thm10:base=exp"), DomainError);
  const RadialWeight w = parse_weight("construct:prop12:c=2,N=3");
  EXPECT_EQ(w.construct()->params.at("N"), 3.0);
  EXPECT_EQ(w.construct()->params.at("c"), 2.0);
}

TEST(Table, MonotoneSamples) {
  for (const char* d : {"construct:prop9", "construct:prop12"}) {
    const auto rows = construct_table(parse_weight(d), 4, 30);
    ASSERT_GT(rows.size(), 100u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_GT(rows[i].r, rows[i - 1].r);
      EXPECT_LE(rows[i].log_tail, rows[i - 1].log_tail);
      EXPECT_GE(rows[i].omega, 0.0);
    }
  }
}
