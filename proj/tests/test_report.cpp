#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bergman/report.hpp"

using namespace bergman;

namespace {

// "inf"/"-inf"/"nan" strings back to doubles
double num(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

}  // namespace

TEST(Json, SortedKeysAndSeventeenDigits) {
  Json j;
  j["zeta"] = 0.1;
  j["alpha"] = 1.0 / 3.0;
  j["mid"] = Json::array({1, 2});
  const std::string s = emit_json(j);
  EXPECT_LT(s.find("\"alpha\""), s.find("\"mid\""));
  EXPECT_LT(s.find("\"mid\""), s.find("\"zeta\""));
  EXPECT_NE(s.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
  EXPECT_EQ(s.back(), '\n');
}

TEST(Json, NonFiniteAsStrings) {
  Json j;
  j["a"] = std::numeric_limits<double>::infinity();
  j["b"] = -std::numeric_limits<double>::infinity();
  j["c"] = std::nan("");
  const Json back = Json::parse(emit_json(j));
  EXPECT_EQ(back["a"], "inf");
  EXPECT_EQ(back["b"], "-inf");
  EXPECT_EQ(back["c"], "nan");
}

TEST(Json, EmptyProfile) {
  EXPECT_EQ(emit_json(Json::array()), "[]\n");
  ClassReport r;
  const Json back = Json::parse(emit_json(to_json(r)));
  EXPECT_TRUE(back["grid"].is_array());
  EXPECT_TRUE(back["grid"].empty());
}

TEST(Json, ByteStable) {
  const ClassReport r = doubling_profile(pow_weight(1.0), default_radial_grid(pow_weight(1.0), ClassName::Dhat));
  EXPECT_EQ(emit_json(to_json(r)), emit_json(to_json(r)));
  const ClassReport again = doubling_profile(pow_weight(1.0), default_radial_grid(pow_weight(1.0), ClassName::Dhat));
  EXPECT_EQ(emit_json(to_json(r)), emit_json(to_json(again)));
}

TEST(Json, RoundTripClassReport) {
  const ClassReport r = doubling_profile(pow_weight(1.0), default_radial_grid(pow_weight(1.0), ClassName::Dhat));
  const Json back = Json::parse(emit_json(to_json(r)));
  EXPECT_EQ(back["verdict"], to_string(r.verdict));
  EXPECT_EQ(num(back["est_constant"]), r.est_constant);
  ASSERT_EQ(back["grid"].size(), r.grid.size());
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    EXPECT_EQ(num(back["grid"][i]["scale"]), r.grid[i].scale);
    EXPECT_EQ(num(back["grid"][i]["ratio"]), r.grid[i].ratio);
  }
  // emitting the parsed document again gives the same bytes
  EXPECT_EQ(emit_json(back), emit_json(to_json(r)));
}

TEST(Json, RoundTripKernelAndTwoWeight) {
  const KernelValue k{cplx(4.0, -1.0 / 7.0), 3e-11, 65};
  const Json kb = Json::parse(emit_json(to_json(k)));
  EXPECT_EQ(num(kb["value"][0]), 4.0);
  EXPECT_EQ(num(kb["value"][1]), -1.0 / 7.0);
  EXPECT_EQ(num(kb["trunc_bound"]), 3e-11);
  EXPECT_EQ(kb["terms"], 65);

  const TwoWeightResult t = two_weight_constants(pow_weight(0.0), pow_weight(2.0), 2.0, {0.1, 0.5, 0.9});
  const Json tb = Json::parse(emit_json(to_json(t)));
  EXPECT_TRUE(std::isinf(num(tb["Ap"])));
  EXPECT_EQ(tb["sigma_integrable"], false);
}

TEST(Csv, Headers) {
  ClassReport r;
  r.grid.push_back({});
  r.grid[0].scale = 0.5;
  r.grid[0].ratio = 1.0 / 3.0;
  EXPECT_EQ(class_report_csv(r), "scale,ratio\n0.5,0.33333333333333331\n");
  EXPECT_EQ(lp_csv(LpReport{}), "index,lhs,rhs,ratio\n");
  EXPECT_EQ(two_weight_csv(TwoWeightResult{}), "r,sigma_hat,Ap_integrand,Mp_integrand\n");
  EXPECT_EQ(table_csv({}), "r,omega,log_tail\n");
  EXPECT_EQ(emit_csv({"a"}, {{std::numeric_limits<double>::infinity()}}), "a\ninf\n");
}

TEST(Output, WritesFileAndReportsFailure) {
  const std::string path = ::testing::TempDir() + "report_out.json";
  write_output(path, "{}\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "{}\n");
  std::remove(path.c_str());
  EXPECT_THROW(write_output("/nonexistent/dir/x.json", "{}"), std::runtime_error);
}
