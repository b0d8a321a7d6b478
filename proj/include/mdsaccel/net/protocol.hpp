#pragma once

// Node wire protocol. TCP, one request per connection, big-endian integers.
//
//   request   0x4D 0x44 | version 0x01 | op 0x01 (GET) | node_id u8
//   response  status u8 (0x00 ok, 0x01 error) | length u32 | payload
//
// An error response carries a UTF-8 message as its payload.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdsaccel::net {

inline constexpr std::uint8_t kMagic0 = 0x4D;
inline constexpr std::uint8_t kMagic1 = 0x44;
inline constexpr std::uint8_t kProtocolVersion = 0x01;
inline constexpr std::uint8_t kOpGet = 0x01;
inline constexpr std::uint8_t kStatusOk = 0x00;
inline constexpr std::uint8_t kStatusError = 0x01;

inline constexpr std::size_t kRequestSize = 5;
inline constexpr std::size_t kResponseHeaderSize = 5;

using RequestBytes = std::array<std::uint8_t, kRequestSize>;

inline RequestBytes encode_request(std::size_t node_id) {
  return {kMagic0, kMagic1, kProtocolVersion, kOpGet, static_cast<std::uint8_t>(node_id)};
}

/// Node id named by a well-formed GET request, or nullopt.
inline std::optional<std::size_t> parse_request(std::span<const std::uint8_t> req) {
  if (req.size() != kRequestSize) return std::nullopt;
  if (req[0] != kMagic0 || req[1] != kMagic1 || req[2] != kProtocolVersion || req[3] != kOpGet) return std::nullopt;
  return req[4];
}

inline std::vector<std::uint8_t> encode_response(std::uint8_t status, std::span<const std::uint8_t> payload) {
  std::vector<std::uint8_t> out;
  out.reserve(kResponseHeaderSize + payload.size());
  const auto len = static_cast<std::uint32_t>(payload.size());
  out.push_back(status);
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

inline std::vector<std::uint8_t> encode_error(const std::string& message) {
  return encode_response(kStatusError, std::span(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()));
}

struct ResponseHeader {
  std::uint8_t status;
  std::uint32_t length;
};

inline ResponseHeader parse_response_header(std::span<const std::uint8_t, kResponseHeaderSize> h) {
  return {h[0], (std::uint32_t{h[1]} << 24) | (std::uint32_t{h[2]} << 16) | (std::uint32_t{h[3]} << 8) |
                    std::uint32_t{h[4]}};
}

}  // namespace mdsaccel::net
