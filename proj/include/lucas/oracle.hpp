#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

#include "lucas/rank.hpp"

// Slow, obviously-correct reference implementations. Everything here is
// independent of the fast paths (no shared shortcuts): plain recurrences,
// trial division, exact rational arithmetic. The test suite and the
// `verify` command hold the fast paths to these.
namespace lucas::oracle {

// Least n >= 1 with m | u_n, found by stepping the recurrence residue by
// residue. Capped at m <= 10^6 and 4*m^2 steps.
inline RankRecord z_scan(const LucasParams& p, u64 m) {
  if (m == 0) throw std::invalid_argument("z_scan: m must be positive");
  if (m > 1000000)
    throw std::invalid_argument("z_scan: oracle capped at m <= 10^6");
  if (!coprime_to_a2(p, m))
    raise(errc::not_coprime, "m shares a factor with a2");
  const u64 a1m = mod_signed(p.a1, m);
  const u64 a2m = mod_signed(p.a2, m);
  u64 prev = 0, cur = 1 % m;
  const u64 bound = 4 * m * m;
  for (u64 n = 1; n <= bound; ++n) {
    if (cur == 0) return {m, n};
    const u64 next = add_mod(mul_mod(a1m, cur, m), mul_mod(a2m, prev, m), m);
    prev = cur;
    cur = next;
  }
  raise(errc::scan_exhausted,
        "no zero residue within 4*m^2 steps at m = " + std::to_string(m));
}

// Exact rational running sum; canonical (reduced, positive denominator)
// after every addition.
class RationalAccumulator {
 public:
  void add(const mpq_class& t) { sum_ += t; }

  void add(u64 num, u64 den) {
    mpq_class t(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
    t.canonicalize();
    sum_ += t;
  }

  const mpq_class& value() const { return sum_; }

 private:
  mpq_class sum_{0};
};

template <class Range>
mpq_class exact_sum(const Range& terms) {
  RationalAccumulator acc;
  for (const auto& t : terms) acc.add(t);
  return acc.value();
}

// Greatest prime factor by trial division; gpf(1) = 1.
inline u64 gpf_brute(u64 n) {
  if (n <= 1) return 1;
  u64 best = 1, rem = n;
  for (u64 p = 2; p * p <= rem; ++p) {
    while (rem % p == 0) {
      rem /= p;
      best = p;
    }
  }
  return rem > 1 ? rem : best;
}

// psi(x, y) by factoring every n <= x; capped at x <= 10^5.
inline u64 psi_brute(u64 x, u64 y) {
  if (x > 100000)
    throw std::invalid_argument("psi_brute: oracle capped at x <= 10^5");
  u64 count = 0;
  for (u64 n = 1; n <= x; ++n) count += gpf_brute(n) <= y ? 1 : 0;
  return count;
}

}  // namespace lucas::oracle
