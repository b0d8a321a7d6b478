#include "mdsaccel/monte_carlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mdsaccel/analytics.hpp"
#include "mdsaccel/report.hpp"
#include "oracles.hpp"

namespace {

using namespace mdsaccel;

SimConfig config(const LatencyModel& model, std::uint64_t trials, std::uint64_t seed = 1) {
  SimConfig c{CodeParams(10, 6, 1), model};
  c.trials = trials;
  c.seed = seed;
  return c;
}

std::string trial_log(const SimRun& run) {
  std::ostringstream out;
  write_trial_log(out, run.records);
  return out.str();
}

TEST(MonteCarlo, UniformExperimentRanges) {
  const auto s = monte_carlo(config(Uniform{100}, 10000)).summary;
  EXPECT_GE(s.mean_da, 49.0);
  EXPECT_LE(s.mean_da, 51.0);
  EXPECT_GE(s.mean_accel, 40.0);
  EXPECT_LE(s.mean_accel, 41.8);
  EXPECT_GE(s.reduction_ratio, 0.16);
  EXPECT_LE(s.reduction_ratio, 0.20);
  EXPECT_EQ(s.trials, 10000u);
}

TEST(MonteCarlo, ShiftedExpExperimentRanges) {
  const auto s = monte_carlo(config(ShiftedExp{0.02, 1}, 10000)).summary;
  EXPECT_GE(s.mean_da, 49.5);
  EXPECT_LE(s.mean_da, 52.5);
  EXPECT_GE(s.mean_accel, 29.5);
  EXPECT_LE(s.mean_accel, 32.5);
  EXPECT_GE(s.reduction_ratio, 0.36);
  EXPECT_LE(s.reduction_ratio, 0.43);
}

TEST(MonteCarlo, ConstantLatencyGivesNoReduction) {
  const auto s = monte_carlo(config(Constant{5}, 1000)).summary;
  EXPECT_EQ(s.mean_da, 5);
  EXPECT_EQ(s.mean_accel, 5);
  EXPECT_EQ(s.reduction_ratio, 0);
  EXPECT_EQ(s.sample_std_da, 0);
  EXPECT_EQ(s.fraction_direct_path, 1.0);
}

TEST(MonteCarlo, AcceleratedNeverSlowerPerTrial) {
  for (const LatencyModel& m : {LatencyModel(Uniform{100}), LatencyModel(ShiftedExp{0.02, 1}),
                                LatencyModel(Adversarial{3, 90, Uniform{100}})}) {
    const auto run = monte_carlo(config(m, 5000), true);
    ASSERT_EQ(run.records.size(), 5000u);
    for (const auto& r : run.records) {
      ASSERT_LE(r.y2, r.y1);
      ASSERT_EQ(r.y2, oracle::y2_by_definition(r.x, r.t, 6));
      ASSERT_GE(r.t, 1u);
      ASSERT_LE(r.t, 6u);
    }
  }
}

TEST(MonteCarlo, SummaryIndependentOfThreadCount) {
  SimConfig c = config(ShiftedExp{0.02, 1}, 20000, 77);
  c.threads = 1;
  const auto one = monte_carlo(c, true);
  for (unsigned threads : {2u, 3u, 8u}) {
    c.threads = threads;
    const auto many = monte_carlo(c, true);
    EXPECT_EQ(many.summary.mean_da, one.summary.mean_da);
    EXPECT_EQ(many.summary.mean_accel, one.summary.mean_accel);
    EXPECT_EQ(many.summary.sample_std_accel, one.summary.sample_std_accel);
    EXPECT_EQ(trial_log(many), trial_log(one));
  }
}

TEST(MonteCarlo, SeedsChangeTheStream) {
  EXPECT_NE(monte_carlo(config(Uniform{100}, 100, 1)).summary.mean_da,
            monte_carlo(config(Uniform{100}, 100, 2)).summary.mean_da);
}

TEST(MonteCarlo, SampledY2MatchesAnalyticCdf) {
  for (const NodeLatency& m : {NodeLatency(Uniform{100}), NodeLatency(ShiftedExp{0.02, 1})}) {
    const auto run = monte_carlo(config(std::visit([](auto v) { return LatencyModel(v); }, m), 100000), true);
    std::vector<double> y2;
    for (const auto& r : run.records) y2.push_back(r.y2);
    const CodeParams p(10, 6, 1);
    EXPECT_LT(oracle::ks_distance(y2, [&](double y) { return analytics::cdf_Y2(p, m, y); }), 0.02);
  }
}

TEST(MonteCarlo, MeanConvergesAcrossSeeds) {
  const double expected = analytics::expected_Y2_uniform(10, 6, 100);
  int inside = 0;
  const int runs = 100;
  for (int seed = 0; seed < runs; ++seed) {
    const auto s = monte_carlo(config(Uniform{100}, 10000, 1000 + seed)).summary;
    const double se = s.sample_std_accel / std::sqrt(10000.0);
    inside += std::abs(s.mean_accel - expected) <= 4 * se;
  }
  EXPECT_GE(inside, 99);
}

TEST(MonteCarlo, FixedTargetAndWorstCase) {
  SimConfig c{CodeParams(3, 2, 1), Adversarial{2, 100, Uniform{100}}};
  c.trials = 100000;
  c.target = FixedTarget{2};
  const auto s = monte_carlo(c).summary;
  EXPECT_EQ(s.mean_da, 100);
  EXPECT_GE(s.reduction_ratio, 0.31);
  EXPECT_LE(s.reduction_ratio, 0.36);
}

TEST(MonteCarlo, RunningExampleAsPerNodeModel) {
  SimConfig c{CodeParams(3, 2, 1), PerNode{{50, 100, 50}}};
  c.trials = 10;
  c.target = FixedTarget{2};
  const auto run = monte_carlo(c, true);
  EXPECT_EQ(run.summary.reduction_ratio, 0.5);
  EXPECT_EQ(run.records[0].nodes_used, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(run.records[0].path, AccessPath::Decoded);
}

TEST(MonteCarlo, ValidationErrors) {
  SimConfig c{CodeParams(3, 2, 1), PerNode{{1, 2}}};
  EXPECT_THROW(monte_carlo(c), InvalidParams);
  c.model = Adversarial{4, 1, Uniform{1}};
  EXPECT_THROW(monte_carlo(c), InvalidParams);
  c.model = Uniform{1};
  c.target = FixedTarget{3};
  EXPECT_THROW(monte_carlo(c), InvalidParams);
  c.target = UniformOverDataNodes{};
  c.trials = 0;
  EXPECT_THROW(monte_carlo(c), InvalidParams);
}

TEST(Report, TrialRecordJsonShape) {
  SimConfig c{CodeParams(3, 2, 1), PerNode{{50, 100, 50}}};
  c.trials = 1;
  c.target = FixedTarget{2};
  const auto run = monte_carlo(c, true);
  const Json j = to_json(run.records[0]);
  EXPECT_EQ(j["trial"], 0);
  EXPECT_EQ(j["t"], 2);
  EXPECT_EQ(j["y1"], 100.0);
  EXPECT_EQ(j["y2"], 50.0);
  EXPECT_EQ(j["path"], "decoded");
  const Json summary = to_json(c, run.summary);
  EXPECT_EQ(summary["reduction_ratio"], 0.5);
}

}  // namespace
