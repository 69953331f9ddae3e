#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "geopot/harness.hpp"

using namespace geopot;

namespace {

HarnessConfig small_config(std::size_t paths = 4000) {
  HarnessConfig c;
  c.grid_n = 13;
  c.mc.n_paths = paths;
  c.mc.workers = 1;
  return c;
}

RatioPoint point(double scale, double computed, double comparator, double err = 0.0) {
  RatioPoint p;
  p.at = {scale};
  p.scale = scale;
  p.computed = computed;
  p.computed_error = err;
  p.comparator = comparator;
  return p;
}

}  // namespace

TEST(Registry, ListsEveryEstimate) {
  const std::set<std::string> expected{
      "lem4.1-V",          "lem4.1-Vprime",         "prop2.1-psidagger",    "prop2.1-V",
      "prop2.1-Vprime-large", "eq-Vprime-approx",   "lem4.2-IntV1",         "lem4.2-IntV2",
      "lem4.2-IntV3",      "lem4.2-IntV4",          "eq-GcomphatG",         "thm4.4-green-halfline",
      "rem4.5-far",        "rem4.5-near",           "lem4.6-poisson-far",   "thm4.6-poisson-halfline",
      "rem4.7-poisson-near", "thm6.2-green-interval-small", "thm6.3-green-interval-large",
      "thm6.4-poisson-interval"};
  std::set<std::string> got;
  for (const auto& e : estimate_registry()) {
    got.insert(e.id);
    EXPECT_FALSE(e.statement.empty()) << e.id;
    EXPECT_TRUE(is_registered(e.id));
  }
  EXPECT_EQ(got, expected);
  EXPECT_FALSE(is_registered("no-such-estimate"));
  EXPECT_THROW(ratio_sweep("no-such-estimate", 1.0), std::invalid_argument);
}

TEST(RatioReports, IdenticalValuesGiveUnitRatio) {
  std::vector<RatioPoint> pts;
  for (double s : {0.01, 0.1, 1.0, 10.0}) pts.push_back(point(s, 3.0 * s, 3.0 * s));
  const RatioReport r = make_ratio_report("lem4.1-V", 1.0, {"x"}, pts, HarnessConfig{});
  EXPECT_EQ(r.inf_ratio, 1.0);
  EXPECT_EQ(r.sup_ratio, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.accepted());
  EXPECT_EQ(r.per_decade.size(), 4u);
}

TEST(RatioReports, DetectsDecadeJumpsAndLargeErrors) {
  std::vector<RatioPoint> pts{point(0.5, 1.0, 1.0), point(5.0, 10.0, 1.0)};
  RatioReport r = make_ratio_report("lem4.1-V", 1.0, {"x"}, pts, HarnessConfig{});
  EXPECT_TRUE(r.in_band);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.decade_stable);
  EXPECT_FALSE(r.accepted());

  pts = {point(0.5, 1.0, 1.0, 0.2)};
  r = make_ratio_report("lem4.1-V", 1.0, {"x"}, pts, HarnessConfig{});
  EXPECT_FALSE(r.errors_ok);
  EXPECT_FALSE(r.pass);

  pts = {point(0.5, 1.0, 1e3)};
  r = make_ratio_report("lem4.1-V", 1.0, {"x"}, pts, HarnessConfig{});
  EXPECT_FALSE(r.in_band);
}

TEST(RatioReports, NotedPointsAreSkipped) {
  std::vector<RatioPoint> pts{point(0.5, 1.0, 1.0), point(5.0, 7.0, 1.0)};
  pts[1].note = "outside region";
  const RatioReport r = make_ratio_report("lem4.1-V", 1.0, {"x"}, pts, HarnessConfig{});
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].ratio, 7.0);
  EXPECT_EQ(r.points.size(), 1u);
}

TEST(RatioReports, Serialization) {
  std::vector<RatioPoint> pts{point(0.5, 1.0, 2.0), point(2.0, 1.0, 4.0)};
  const RatioReport r = make_ratio_report("lem4.1-V", 1.0, {"x"}, pts, HarnessConfig{});
  const nlohmann::json j = nlohmann::json::parse(r.to_json().dump());
  EXPECT_EQ(j["estimate_id"], "lem4.1-V");
  EXPECT_EQ(j["inf_ratio"], 0.25);
  EXPECT_EQ(j["sup_ratio"], 0.5);
  EXPECT_EQ(j["pass"], true);
  EXPECT_TRUE(j.contains("accepted"));
  const std::string csv = r.to_csv();
  EXPECT_NE(csv.find("ratio"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n') >= 3, true);
}

TEST(Grids, Parsing) {
  EXPECT_EQ(parse_grid("1,2,3"), (std::vector<double>{1, 2, 3}));
  const auto lg = parse_grid("log:1e-2:1e2:5");
  ASSERT_EQ(lg.size(), 5u);
  EXPECT_NEAR(lg[1], 0.1, 1e-15);
  EXPECT_NEAR(lg[4], 100.0, 1e-12);
  const auto ln = parse_grid("lin:0:1:3");
  EXPECT_EQ(ln, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(parse_grid("log:0:1:3"), std::invalid_argument);
  EXPECT_THROW(parse_grid("x,y"), std::invalid_argument);
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(Sweeps, RenewalComparisonInBand) {
  const RatioReport r = ratio_sweep("lem4.1-V", 1.0, small_config());
  EXPECT_TRUE(r.accepted());
  EXPECT_GT(r.inf_ratio, 1.0);
  EXPECT_LT(r.sup_ratio, 1.2);
}

TEST(Sweeps, HalfLineGreenGaussianCase) {
  const RatioReport r = ratio_sweep("thm4.4-green-halfline", 2.0, small_config());
  EXPECT_TRUE(r.accepted());
  EXPECT_FALSE(r.points.empty());
}

TEST(Sweeps, DeterministicOutput) {
  HarnessConfig c = small_config();
  c.grid = {0.01, 0.1, 1.0, 10.0};
  EXPECT_EQ(ratio_sweep("lem4.2-IntV3", 1.5, c).to_json().dump(), ratio_sweep("lem4.2-IntV3", 1.5, c).to_json().dump());
}

TEST(MonteCarloChecks, SurvivalConstant) {
  Harness h(small_config(20000));
  const C1Report r = h.measure_C1(1.0);
  EXPECT_GT(r.C1, 0.0);
  EXPECT_LE(r.C1, 1.0);
  EXPECT_NEAR(r.C1_refined / r.C1, 1.0, 0.1);
  EXPECT_EQ(r.rows.size(), 9u);
}

TEST(MonteCarloChecks, HarnackRejectsBadP) {
  Harness h(small_config());
  EXPECT_THROW(h.check_harnack({1.0}, 1.0, 2.0), std::invalid_argument);
}

TEST(MonteCarloChecks, BoundaryHarnackNormalizedAtR) {
  Harness h(small_config());
  const BhpReport r = h.check_bhp({1.0}, 1.0);
  ASSERT_EQ(r.rows.size(), 10u);
  for (const auto& row : r.rows)
    if (row.x == row.r) EXPECT_DOUBLE_EQ(row.q, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(MonteCarloChecks, InequalitySuiteGaussian) {
  Harness h(small_config(20000));
  const InequalityReport r = h.inequality_suite({2.0});
  EXPECT_TRUE(r.pass());
  EXPECT_FALSE(r.checks.empty());
  for (const auto& c : r.checks)
    if (!c.skipped) EXPECT_TRUE(c.pass) << c.name << " at " << c.at;
}
