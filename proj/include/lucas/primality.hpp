#pragma once

#include <bit>
#include <initializer_list>

#include "lucas/modmath.hpp"

namespace lucas {

// Deterministic Miller-Rabin for 64-bit inputs; the fixed witness set
// {2, 3, ..., 37} is known to cover the full u64 range.
inline bool is_prime_u64(u64 n) {
  constexpr u64 kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (u64 p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  const int s = std::countr_zero(n - 1);
  const u64 d = (n - 1) >> s;
  for (u64 a : kWitnesses) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace lucas
