#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lucas/error.hpp"

namespace lucas {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// a, b < m; safe for any m up to 2^64 - 1.
inline u64 add_mod(u64 a, u64 b, u64 m) {
  return a >= m - b && b ? a - (m - b) : a + b;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) {
  return a >= b ? a - b : a + (m - b);
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// a reduced into [0, m).
inline u64 mod_signed(i64 a, u64 m) {
  i128 r = static_cast<i128>(a) % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

inline u64 abs_u64(i64 v) {
  return v < 0 ? 0ull - static_cast<u64>(v) : static_cast<u64>(v);
}

inline u64 checked_mul(u64 a, u64 b) {
  const u128 p = static_cast<u128>(a) * b;
  if (p > std::numeric_limits<u64>::max())
    raise(errc::overflow, "product exceeds 64 bits");
  return static_cast<u64>(p);
}

inline u64 checked_pow(u64 base, u32 exp) {
  u64 r = 1;
  while (exp) {
    if (exp & 1) r = checked_mul(r, base);
    exp >>= 1;
    if (exp) base = checked_mul(base, base);
  }
  return r;
}

// a, b >= 1
inline u64 lcm_u64(u64 a, u64 b) {
  return checked_mul(a / std::gcd(a, b), b);
}

// Legendre symbol (a|p) for an odd prime p, by Euler's criterion.
inline int legendre(i64 a, u64 p) {
  const u64 r = mod_signed(a, p);
  if (r == 0) return 0;
  const u64 t = pow_mod(r, (p - 1) / 2, p);
  if (t == 1) return 1;
  if (t == p - 1) return -1;
  throw std::invalid_argument("legendre: modulus " + std::to_string(p) +
                              " is not an odd prime");
}

}  // namespace lucas
