#pragma once

#include <stdexcept>
#include <vector>

#include "lucas/modmath.hpp"

namespace lucas {

// Linear sieve: smallest prime factor of every n <= limit, plus the prime
// list. spf fits in u32, so limits are capped at 2^31 - 1 (u32 values with
// headroom for derived tables).
struct SpfSieve {
  u64 limit = 0;
  std::vector<u32> spf;
  std::vector<u32> primes;

  static SpfSieve build(u64 limit) {
    if (limit >= (u64(1) << 31))
      throw std::invalid_argument("SpfSieve: limit capped at 2^31 - 1");
    SpfSieve s;
    s.limit = limit;
    s.spf.assign(limit + 1, 0);
    if (limit >= 1) s.spf[1] = 1;
    for (u64 i = 2; i <= limit; ++i) {
      if (s.spf[i] == 0) {
        s.spf[i] = static_cast<u32>(i);
        s.primes.push_back(static_cast<u32>(i));
      }
      for (u32 p : s.primes) {
        if (p > s.spf[i] || i * p > limit) break;
        s.spf[i * p] = p;
      }
    }
    return s;
  }

  bool is_prime(u64 n) const { return n >= 2 && spf[n] == n; }
};

}  // namespace lucas
