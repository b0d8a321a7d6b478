#include "mdsaccel/latency_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"

namespace {

using namespace mdsaccel;

std::vector<double> draw(const NodeLatency& model, std::uint64_t seed, std::size_t count) {
  SeededRng rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = sample(model, rng);
  return out;
}

TEST(SeededRng, KnownSplitMix64Stream) {
  // First outputs of SplitMix64 seeded with 0, as published with the reference implementation.
  SeededRng rng(0);
  EXPECT_EQ(rng.next_u64(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng.next_u64(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng.next_u64(), 0x06C45D188009454Full);
}

TEST(SeededRng, UniformInUnitInterval) {
  SeededRng rng(42);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SeededRng, EqualSeedsGiveEqualStreams) {
  EXPECT_EQ(draw(ShiftedExp{0.02, 1}, 99, 1000), draw(ShiftedExp{0.02, 1}, 99, 1000));
  EXPECT_NE(draw(ShiftedExp{0.02, 1}, 99, 10), draw(ShiftedExp{0.02, 1}, 98, 10));
}

TEST(Sample, ConstantIsDegenerate) {
  SeededRng rng(1);
  EXPECT_EQ(sample(Constant{100}, rng), 100);
}

TEST(Sample, ShiftedExpRespectsThreshold) {
  for (double x : draw(ShiftedExp{0.5, 3}, 5, 100000)) ASSERT_GE(x, 3.0);
}

TEST(Sample, UniformMeanConverges) {
  const auto xs = draw(Uniform{100}, 2024, 1000000);
  double sum = 0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  EXPECT_GE(mean, 49.8);
  EXPECT_LE(mean, 50.2);
}

TEST(Cdf, Uniform) {
  const NodeLatency u = Uniform{100};
  EXPECT_DOUBLE_EQ(cdf(u, 50), 0.5);
  EXPECT_EQ(cdf(u, -1), 0.0);
  EXPECT_EQ(cdf(u, 100), 1.0);
  EXPECT_EQ(cdf(u, 1e9), 1.0);
  EXPECT_DOUBLE_EQ(pdf(u, 30), 0.01);
  EXPECT_EQ(pdf(u, 101), 0.0);
}

TEST(Cdf, ShiftedExp) {
  const NodeLatency e = ShiftedExp{0.02, 1};
  EXPECT_EQ(cdf(e, 1), 0.0);
  EXPECT_EQ(cdf(e, 0.5), 0.0);
  EXPECT_NEAR(cdf(e, 51), 1 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(cdf(e, 51), 0.63212, 1e-5);
  EXPECT_EQ(pdf(e, 0.99), 0.0);
  EXPECT_DOUBLE_EQ(pdf(e, 1), 0.02);
}

TEST(Cdf, ConstantIsStep) {
  const NodeLatency c = Constant{7};
  EXPECT_EQ(cdf(c, 6.999), 0.0);
  EXPECT_EQ(cdf(c, 7), 1.0);
}

TEST(Cdf, MonotoneWithCorrectLimits) {
  for (const NodeLatency& m : {NodeLatency(Uniform{3}), NodeLatency(ShiftedExp{1.5, 0.2}), NodeLatency(Constant{2})}) {
    EXPECT_EQ(cdf(m, -1e300), 0.0);
    EXPECT_EQ(cdf(m, 1e300), 1.0);
    double prev = 0;
    for (double y = -1; y < 40; y += 0.01) {
      const double f = cdf(m, y);
      ASSERT_GE(f, prev);
      prev = f;
    }
  }
}

TEST(Cdf, DerivativeMatchesPdf) {
  const double h = 1e-5;
  struct Case {
    NodeLatency model;
    double lo, hi;
  };
  for (const auto& c : {Case{Uniform{100}, 0, 100}, Case{ShiftedExp{0.02, 1}, 1, 300}, Case{ShiftedExp{2, 0}, 0, 5}}) {
    for (int i = 1; i <= 100; ++i) {
      const double y = c.lo + (c.hi - c.lo) * i / 101.0;
      const double fd = (cdf(c.model, y + h) - cdf(c.model, y - h)) / (2 * h);
      ASSERT_NEAR(fd, pdf(c.model, y), 1e-6) << "y=" << y;
    }
  }
}

TEST(Cdf, EmpiricalMatchesAnalytic) {
  for (const NodeLatency& m : {NodeLatency(Uniform{100}), NodeLatency(ShiftedExp{0.02, 1})}) {
    const auto xs = draw(m, 77, 100000);
    EXPECT_LT(oracle::ks_distance(xs, [&](double y) { return cdf(m, y); }), 0.01);
  }
}

TEST(Validate, RejectsBadParameters) {
  EXPECT_THROW(validate(NodeLatency(Uniform{0})), InvalidParams);
  EXPECT_THROW(validate(NodeLatency(ShiftedExp{0, 1})), InvalidParams);
  EXPECT_THROW(validate(NodeLatency(ShiftedExp{1, -1})), InvalidParams);
  EXPECT_THROW(validate(NodeLatency(Constant{-1})), InvalidParams);
  EXPECT_THROW(validate(LatencyModel(PerNode{})), InvalidParams);
  EXPECT_THROW(validate(LatencyModel(Adversarial{0, 1, Uniform{1}})), InvalidParams);
  EXPECT_THROW(validate(LatencyModel(Adversarial{1, 1, Uniform{-1}})), InvalidParams);
}

TEST(Marginal, HeterogeneousModels) {
  const LatencyModel per = PerNode{{50, 100, 50}};
  EXPECT_EQ(std::get<Constant>(marginal(per, 2)).v, 100);
  EXPECT_THROW(marginal(per, 4), InvalidParams);
  const LatencyModel adv = Adversarial{2, 100, Uniform{100}};
  EXPECT_EQ(std::get<Constant>(marginal(adv, 2)).v, 100);
  EXPECT_EQ(std::get<Uniform>(marginal(adv, 1)).T, 100);
  EXPECT_FALSE(is_iid(adv));
  EXPECT_TRUE(is_iid(LatencyModel(Uniform{1})));
}

TEST(FitShiftedExp, RecoversSyntheticParameters) {
  const auto xs = draw(ShiftedExp{0.02, 1}, 31337, 100000);
  const ShiftedExp fit = fit_shifted_exp(xs);
  EXPECT_GE(fit.lambda, 0.019);
  EXPECT_LE(fit.lambda, 0.021);
  EXPECT_GE(fit.s, 1.0);
  EXPECT_LE(fit.s, 1.01);
}

TEST(FitShiftedExp, TwoSamplesDirectFormula) {
  // s = min = 1, mean = 2, lambda = 1 / (2 - 1).
  const std::vector<double> xs = {1, 3};
  const ShiftedExp fit = fit_shifted_exp(xs);
  EXPECT_EQ(fit.s, 1.0);
  EXPECT_EQ(fit.lambda, 1.0);
}

TEST(FitShiftedExp, DegenerateInputs) {
  EXPECT_THROW(fit_shifted_exp(std::vector<double>{4, 4, 4}), FitError);
  EXPECT_THROW(fit_shifted_exp(std::vector<double>{4}), FitError);
}

}  // namespace
