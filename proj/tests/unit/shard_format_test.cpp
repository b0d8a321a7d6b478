#include "mdsaccel/shard_format.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace {

using namespace mdsaccel;

TEST(ShardFormat, HeaderLayoutIsBitExact) {
  const Shard shard{CodeParams(3, 2, 2), 3, {0xAA, 0xBB}};
  const auto bytes = serialize_shard(shard);
  const std::vector<std::uint8_t> expected = {'M', 'D', 'S', 'F', 1, 3, 2, 0, 0, 0, 2, 3, 0xAA, 0xBB};
  EXPECT_EQ(bytes, expected);
}

TEST(ShardFormat, LargeMIsBigEndian) {
  const Shard shard{CodeParams(4, 2, 0x010203), 1, Column(0x010203, 7)};
  const auto bytes = serialize_shard(shard);
  EXPECT_EQ(bytes[7], 0x00);
  EXPECT_EQ(bytes[8], 0x01);
  EXPECT_EQ(bytes[9], 0x02);
  EXPECT_EQ(bytes[10], 0x03);
  EXPECT_EQ(parse_shard(bytes).symbols.size(), 0x010203u);
}

TEST(ShardFormat, ParseInvertsSerialize) {
  std::mt19937 rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rng() % 30, k = 1 + rng() % (n - 1), m = 1 + rng() % 64;
    Shard shard{CodeParams(n, k, m), 1 + rng() % n, Column(m)};
    for (auto& b : shard.symbols) b = static_cast<std::uint8_t>(rng());
    const Shard back = parse_shard(serialize_shard(shard));
    EXPECT_EQ(back.params, shard.params);
    EXPECT_EQ(back.node_id, shard.node_id);
    EXPECT_EQ(back.symbols, shard.symbols);
  }
}

TEST(ShardFormat, RejectsCorruptHeaders) {
  auto good = serialize_shard(Shard{CodeParams(3, 2, 2), 1, {1, 2}});
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(parse_shard(bad), FormatError);
  bad = good;
  bad[4] = 2;
  EXPECT_THROW(parse_shard(bad), FormatError);
  bad = good;
  bad.pop_back();
  EXPECT_THROW(parse_shard(bad), FormatError);
  bad = good;
  bad[11] = 4;  // node id beyond n
  EXPECT_THROW(parse_shard(bad), FormatError);
  bad = good;
  bad[6] = 3;  // k == n
  EXPECT_THROW(parse_shard(bad), FormatError);
  EXPECT_THROW(parse_shard(std::vector<std::uint8_t>(5, 0)), FormatError);
}

TEST(ShardFormat, FileRoundTrip) {
  oracle::TempDir dir;
  const Shard shard{CodeParams(5, 3, 3), 4, {9, 8, 7}};
  save_shard(dir.path() / "node4.shard", shard);
  const Shard back = load_shard(dir.path() / "node4.shard");
  EXPECT_EQ(back.symbols, shard.symbols);
  EXPECT_THROW(load_shard(dir.path() / "missing.shard"), FormatError);
}

}  // namespace
