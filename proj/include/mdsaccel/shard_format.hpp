#pragma once

// Shard file: 12-byte header followed by the node's m symbol bytes.
//
//   offset 0  "MDSF"
//   offset 4  version   u8 (= 1)
//   offset 5  n         u8
//   offset 6  k         u8
//   offset 7  m         u32 big-endian
//   offset 11 node_id   u8 (1-based)
//   offset 12 payload   m bytes

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/mds_codec.hpp"

namespace mdsaccel {

inline constexpr std::array<std::uint8_t, 4> kShardMagic = {'M', 'D', 'S', 'F'};
inline constexpr std::uint8_t kShardVersion = 1;
inline constexpr std::size_t kShardHeaderSize = 12;

struct Shard {
  CodeParams params;
  std::size_t node_id;
  Column symbols;
};

inline std::vector<std::uint8_t> serialize_shard(const Shard& shard) {
  if (shard.node_id < 1 || shard.node_id > shard.params.n())
    throw FormatError("shard node_id outside [1, n]");
  if (shard.symbols.size() != shard.params.m())
    throw FormatError("shard payload length differs from m");
  if (shard.params.m() > 0xFFFFFFFFull) throw FormatError("m does not fit in u32");

  std::vector<std::uint8_t> out(kShardMagic.begin(), kShardMagic.end());
  const auto m = static_cast<std::uint32_t>(shard.params.m());
  out.push_back(kShardVersion);
  out.push_back(static_cast<std::uint8_t>(shard.params.n()));
  out.push_back(static_cast<std::uint8_t>(shard.params.k()));
  out.push_back(static_cast<std::uint8_t>(m >> 24));
  out.push_back(static_cast<std::uint8_t>(m >> 16));
  out.push_back(static_cast<std::uint8_t>(m >> 8));
  out.push_back(static_cast<std::uint8_t>(m));
  out.push_back(static_cast<std::uint8_t>(shard.node_id));
  out.insert(out.end(), shard.symbols.begin(), shard.symbols.end());
  return out;
}

inline Shard parse_shard(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kShardHeaderSize) throw FormatError("shard shorter than its header");
  if (!std::equal(kShardMagic.begin(), kShardMagic.end(), bytes.begin()))
    throw FormatError("bad shard magic");
  if (bytes[4] != kShardVersion)
    throw FormatError("unsupported shard version " + std::to_string(bytes[4]));
  const std::size_t n = bytes[5];
  const std::size_t k = bytes[6];
  const std::size_t m = (std::size_t{bytes[7]} << 24) | (std::size_t{bytes[8]} << 16) |
                        (std::size_t{bytes[9]} << 8) | std::size_t{bytes[10]};
  const std::size_t node_id = bytes[11];
  if (bytes.size() != kShardHeaderSize + m)
    throw FormatError("shard payload length " + std::to_string(bytes.size() - kShardHeaderSize) +
                      " differs from header m=" + std::to_string(m));

  CodeParams params = [&] {
    try {
      return CodeParams(n, k, m);
    } catch (const InvalidParams& e) {
      throw FormatError(std::string("shard header: ") + e.what());
    }
  }();
  if (node_id < 1 || node_id > n) throw FormatError("shard node_id outside [1, n]");
  return Shard{params, node_id, Column(bytes.begin() + kShardHeaderSize, bytes.end())};
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path.string());
}

inline Shard load_shard(const std::filesystem::path& path) { return parse_shard(read_file_bytes(path)); }

inline void save_shard(const std::filesystem::path& path, const Shard& shard) {
  write_file_bytes(path, serialize_shard(shard));
}

}  // namespace mdsaccel
