#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "lucas/error.hpp"
#include "lucas/modmath.hpp"

namespace lucas {

// gpf[n] = greatest prime factor of n for n <= limit, with gpf[1] = 1.
// Built by a segmented divide-out pass: base primes up to sqrt(limit), a
// cache-sized u64 remainder scratch per segment, and whatever remains > 1
// after dividing out small primes is the (unique, > sqrt(limit)) gpf.
struct SmoothSieve {
  u64 limit = 0;
  std::vector<u32> gpf;

  static SmoothSieve build(u64 x, u64 memory_budget_bytes = u64(2) << 30) {
    if (x == 0) throw std::invalid_argument("SmoothSieve: x must be >= 1");
    if (x >= (u64(1) << 32))
      raise(errc::memory_budget_exceeded,
            "gpf values are stored as u32; x must stay below 2^32");
    constexpr u64 kSegment = u64(1) << 20;
    const u64 need = 4 * (x + 1) + 8 * std::min(kSegment, x + 1);
    if (need > memory_budget_bytes) {
      const u64 scratch = 8 * kSegment;
      const u64 fits = memory_budget_bytes > scratch + 4
                           ? (memory_budget_bytes - scratch) / 4 - 1
                           : 0;
      raise(errc::memory_budget_exceeded,
            "gpf table for x = " + std::to_string(x) + " needs " +
                std::to_string(need) + " bytes; largest x within budget is " +
                std::to_string(fits));
    }
    SmoothSieve s;
    s.limit = x;
    s.gpf.assign(x + 1, 1);
    s.gpf[0] = 0;

    // base primes <= sqrt(x)
    u64 root = 1;
    while ((root + 1) * (root + 1) <= x) ++root;
    std::vector<u32> base;
    {
      std::vector<bool> comp(root + 1, false);
      for (u64 p = 2; p <= root; ++p) {
        if (comp[p]) continue;
        base.push_back(static_cast<u32>(p));
        for (u64 m = p * p; m <= root; m += p) comp[m] = true;
      }
    }

    std::vector<u64> rem(std::min(kSegment, x + 1));
    for (u64 lo = 1; lo <= x; lo += kSegment) {
      const u64 hi = std::min(x, lo + kSegment - 1);
      for (u64 n = lo; n <= hi; ++n) rem[n - lo] = n;
      for (u32 p : base) {
        u64 m = (lo + p - 1) / p * p;
        if (m < p) m = p;
        for (; m <= hi; m += p) {
          u64& r = rem[m - lo];
          while (r % p == 0) r /= p;
          s.gpf[m] = p;
        }
      }
      for (u64 n = lo; n <= hi; ++n) {
        const u64 r = rem[n - lo];
        if (r > 1) s.gpf[n] = static_cast<u32>(r);
      }
    }
    return s;
  }
};

// psi(x, y) = #{ 1 <= n <= x : gpf(n) <= y }; n = 1 always counts.
inline u64 psi(const SmoothSieve& s, u64 x, u64 y) {
  if (x > s.limit)
    throw std::invalid_argument("psi: x exceeds the sieve limit");
  u64 count = 0;
  for (u64 n = 1; n <= x; ++n) count += s.gpf[n] <= y ? 1 : 0;
  return count;
}

}  // namespace lucas
