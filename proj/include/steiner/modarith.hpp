#pragma once

// Exact arithmetic in Z_m and on the extended point set Z_m ∪ {∞}.

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "steiner/error.hpp"

namespace steiner {

using Residue = std::uint32_t;

inline constexpr std::uint32_t kMaxModulus = 1u << 20;

class GroupContext {
 public:
  explicit GroupContext(std::uint32_t modulus) : modulus_(modulus) {
    if (modulus < 2 || modulus > kMaxModulus) {
      throw Error(ErrorCode::ModulusOutOfRange,
                  "modulus " + std::to_string(modulus) + " outside [2, 2^20]");
    }
  }

  std::uint32_t modulus() const noexcept { return modulus_; }

  Residue reduce(std::int64_t x) const noexcept {
    const auto m = static_cast<std::int64_t>(modulus_);
    auto r = x % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    const std::uint32_t s = a + b;
    return s >= modulus_ ? s - modulus_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + modulus_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : modulus_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % modulus_);
  }
  bool is_unit(Residue u) const noexcept { return std::gcd(u % modulus_, modulus_) == 1; }

  friend bool operator==(const GroupContext&, const GroupContext&) = default;

 private:
  std::uint32_t modulus_;
};

/// A finite residue or the fixed point ∞. ∞ orders after every residue.
class Point {
 public:
  static constexpr Point finite(Residue r) noexcept { return Point(r); }
  static constexpr Point infinity() noexcept { return Point(kInfinity); }

  constexpr bool is_infinity() const noexcept { return value_ == kInfinity; }
  constexpr bool is_finite() const noexcept { return value_ != kInfinity; }
  constexpr Residue residue() const noexcept { return value_; }

  friend constexpr auto operator<=>(Point, Point) = default;

  std::string to_string() const { return is_infinity() ? "inf" : std::to_string(value_); }

 private:
  static constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();
  constexpr explicit Point(std::uint32_t v) noexcept : value_(v) {}
  std::uint32_t value_;
};

inline void require_unit(Residue u, const GroupContext& ctx) {
  if (!ctx.is_unit(u)) {
    throw Error(ErrorCode::NotAUnit,
                std::to_string(u) + " is not a unit mod " + std::to_string(ctx.modulus()));
  }
}

/// Least t >= 1 with u^t = 1 (mod m).
inline std::uint32_t multiplicative_order(Residue u, const GroupContext& ctx) {
  require_unit(u, ctx);
  const Residue one = 1 % ctx.modulus();
  Residue x = u % ctx.modulus();
  std::uint32_t t = 1;
  while (x != one) {
    x = ctx.mul(x, u);
    ++t;
  }
  return t;
}

/// The cyclic subgroup generated by g: multiples of gcd(g, m), ascending.
inline std::vector<Residue> additive_subgroup(Residue g, const GroupContext& ctx) {
  const std::uint32_t m = ctx.modulus();
  const std::uint32_t step = std::gcd(g % m, m);  // gcd(0, m) = m
  std::vector<Residue> out;
  out.reserve(m / step);
  for (std::uint32_t x = 0; x < m; x += step) out.push_back(x);
  return out;
}

inline Point affine_image(Point p, Residue u, Residue c, const GroupContext& ctx) {
  require_unit(u, ctx);
  if (p.is_infinity()) return p;
  return Point::finite(ctx.add(ctx.mul(u, p.residue()), c % ctx.modulus()));
}

}  // namespace steiner
