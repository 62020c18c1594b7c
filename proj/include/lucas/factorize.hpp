#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lucas/primality.hpp"
#include "lucas/sieve.hpp"

namespace lucas {

// (prime, exponent) pairs with primes strictly increasing; the product
// reconstructs n exactly.
struct Factorization {
  u64 n = 1;
  std::vector<std::pair<u64, u32>> factors;
};

// Brent-cycle rho with a fixed offset schedule c = 1, 2, 3, ... and start
// x = 2, so the factor found for a given n is the same on every run.
// pre: n composite, n odd, n not divisible by small primes < 1024.
inline u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    const auto step = [&](u64 x) { return add_mod(mul_mod(x, x, n), c, n); };
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 batch = 128;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        const u64 lim = std::min(batch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

namespace detail {

inline void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace detail

inline Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization f;
  f.n = n;
  u64 rem = n;
  for (u64 p = 2; p < 1024 && p * p <= rem; p += (p == 2 ? 1 : 2)) {
    if (rem % p) continue;
    u32 e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  }
  if (rem > 1) {
    std::vector<u64> big;
    detail::factor_rec(rem, big);
    std::sort(big.begin(), big.end());
    for (std::size_t i = 0; i < big.size();) {
      std::size_t j = i;
      while (j < big.size() && big[j] == big[i]) ++j;
      f.factors.emplace_back(big[i], static_cast<u32>(j - i));
      i = j;
    }
  }
  return f;
}

inline Factorization factorize(u64 n, const SpfSieve& s) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  if (n > s.limit) return factorize(n);
  Factorization f;
  f.n = n;
  u64 rem = n;
  while (rem > 1) {
    const u64 p = s.spf[rem];
    u32 e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  }
  return f;
}

inline u64 greatest_prime_factor(const Factorization& f) {
  return f.factors.empty() ? 1 : f.factors.back().first;
}

}  // namespace lucas
