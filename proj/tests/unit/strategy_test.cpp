#include "mdsaccel/strategy.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace {

using namespace mdsaccel;

using Ids = std::vector<std::size_t>;

TEST(Strategies, RunningExample) {
  const CodeParams p(3, 2, 1);
  const std::vector<double> x = {50, 100, 50};
  EXPECT_EQ(run_da(x, p, 2), 100);
  for (const auto& r : {run_aakl(x, p, 2), run_aaul(x, p, 2)}) {
    EXPECT_EQ(r.time, 50);
    EXPECT_EQ(r.path, AccessPath::Decoded);
    EXPECT_EQ(r.nodes_used, (Ids{1, 3}));
  }
}

TEST(Strategies, FastTargetReadsDirectly) {
  const CodeParams p(3, 2, 1);
  const std::vector<double> x = {10, 100, 100};
  for (const auto& r : {run_aakl(x, p, 1), run_aaul(x, p, 1)}) {
    EXPECT_EQ(r.time, 10);
    EXPECT_EQ(r.path, AccessPath::Direct);
    EXPECT_EQ(r.nodes_used, (Ids{1}));
  }
}

TEST(Strategies, TiesFavourLowerNodeId) {
  const CodeParams p(3, 2, 1);
  const std::vector<double> all_equal = {7, 7, 7};
  // Target 2 ties with node 1; node 1 completes first, then node 2 is the target.
  EXPECT_EQ(run_aaul(all_equal, p, 2).path, AccessPath::Direct);
  EXPECT_EQ(run_aakl(all_equal, p, 2).path, AccessPath::Direct);
  const CodeParams q(4, 2, 1);
  const std::vector<double> x = {9, 9, 5, 5};
  const auto r = run_aaul(x, q, 2);
  EXPECT_EQ(r.path, AccessPath::Decoded);
  EXPECT_EQ(r.nodes_used, (Ids{3, 4}));
  EXPECT_EQ(r.time, 5);
}

TEST(Strategies, RejectBadRequests) {
  const CodeParams p(3, 2, 1);
  const std::vector<double> x = {1, 2, 3};
  EXPECT_THROW(run_da(x, p, 3), RequestError);
  EXPECT_THROW(run_aaul(x, p, 0), RequestError);
  EXPECT_THROW(run_aakl(std::vector<double>{1, 2}, p, 1), RequestError);
}

TEST(Strategies, AgreeWithDefinitionOnRandomDraws) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 100);
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{10, 6}, {3, 2}, {5, 1}, {14, 10}}) {
    const CodeParams p(n, k, 1);
    for (int trial = 0; trial < 10000; ++trial) {
      std::vector<double> x(n);
      for (auto& v : x) v = u(rng);
      const std::size_t t = 1 + rng() % k;
      const auto known = run_aakl(x, p, t);
      const auto unknown = run_aaul(x, p, t);
      ASSERT_EQ(known.time, unknown.time);
      ASSERT_EQ(unknown.time, oracle::y2_by_definition(x, t, k));
      ASSERT_LE(unknown.time, run_da(x, p, t));
      if (unknown.path == AccessPath::Decoded) {
        ASSERT_EQ(unknown.nodes_used.size(), k);
        for (std::size_t id : unknown.nodes_used) {
          ASSERT_NE(id, t);
          ASSERT_LE(x[id - 1], unknown.time);
        }
      }
    }
  }
}

TEST(Strategies, IntegerLatenciesWithManyTies) {
  std::mt19937_64 rng(8);
  const CodeParams p(6, 3, 1);
  for (int trial = 0; trial < 5000; ++trial) {
    std::vector<double> x(6);
    for (auto& v : x) v = static_cast<double>(rng() % 4);
    const std::size_t t = 1 + rng() % 3;
    const auto r = run_aaul(x, p, t);
    ASSERT_EQ(r.time, oracle::y2_by_definition(x, t, 3));
    ASSERT_EQ(r.time, run_aakl(x, p, t).time);
  }
}

}  // namespace
