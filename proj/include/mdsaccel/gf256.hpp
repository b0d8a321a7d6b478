#pragma once

#include <array>
#include <cstdint>
#include <ostream>

#include "mdsaccel/errors.hpp"

namespace mdsaccel::gf256 {

// Field polynomial x^8 + x^4 + x^3 + x + 1. 0x03 generates the multiplicative group.
inline constexpr unsigned kPolynomial = 0x11B;
inline constexpr unsigned kGenerator = 0x03;

namespace detail {

struct Tables {
  std::array<std::uint8_t, 512> exp{};  // doubled so exp[log a + log b] never wraps
  std::array<std::uint8_t, 256> log{};
};

constexpr std::uint8_t xtime_mul3(std::uint8_t x) {
  unsigned v = x;
  unsigned doubled = v << 1;
  if (doubled & 0x100) doubled ^= kPolynomial;
  return static_cast<std::uint8_t>(doubled ^ v);
}

constexpr Tables make_tables() {
  Tables t;
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.exp[i + 255] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    x = xtime_mul3(x);
  }
  t.exp[510] = t.exp[0];
  t.exp[511] = t.exp[1];
  return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace detail

/// An element of GF(2^8). Arithmetic is carried by the free functions below
/// and mirrored by operators.
class FieldElem {
 public:
  constexpr FieldElem() = default;
  constexpr explicit FieldElem(std::uint8_t v) : value_(v) {}

  constexpr std::uint8_t value() const noexcept { return value_; }
  constexpr bool is_zero() const noexcept { return value_ == 0; }

  friend constexpr bool operator==(FieldElem, FieldElem) = default;

 private:
  std::uint8_t value_ = 0;
};

constexpr FieldElem add(FieldElem a, FieldElem b) noexcept {
  return FieldElem(static_cast<std::uint8_t>(a.value() ^ b.value()));
}

// Subtraction coincides with addition in characteristic 2.
constexpr FieldElem sub(FieldElem a, FieldElem b) noexcept { return add(a, b); }

constexpr FieldElem mul(FieldElem a, FieldElem b) noexcept {
  if (a.is_zero() || b.is_zero()) return FieldElem{};
  const auto& t = detail::kTables;
  return FieldElem(t.exp[t.log[a.value()] + t.log[b.value()]]);
}

constexpr FieldElem inv(FieldElem a) {
  if (a.is_zero()) throw DivisionByZero();
  const auto& t = detail::kTables;
  return FieldElem(t.exp[255 - t.log[a.value()]]);
}

constexpr FieldElem div(FieldElem a, FieldElem b) { return mul(a, inv(b)); }

constexpr FieldElem operator+(FieldElem a, FieldElem b) noexcept { return add(a, b); }
constexpr FieldElem operator*(FieldElem a, FieldElem b) noexcept { return mul(a, b); }
constexpr FieldElem& operator+=(FieldElem& a, FieldElem b) noexcept { return a = add(a, b); }
constexpr FieldElem& operator*=(FieldElem& a, FieldElem b) noexcept { return a = mul(a, b); }

inline std::ostream& operator<<(std::ostream& os, FieldElem e) {
  return os << static_cast<unsigned>(e.value());
}

// Byte-level shortcuts used by the codec's inner loops.
constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>(a ^ b);
}

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept {
  return mul(FieldElem(a), FieldElem(b)).value();
}

}  // namespace mdsaccel::gf256
