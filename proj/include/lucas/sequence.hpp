#pragma once

#include <gmpxx.h>

#include <bit>
#include <cassert>
#include <stdexcept>
#include <utility>

#include "lucas/params.hpp"

namespace lucas {

// u_n as an exact integer. Values grow geometrically, so this is the
// reference path for moderate n; everything fast goes through uv_mod.
inline mpz_class u_exact(const LucasParams& p, u64 n) {
  if (n == 0) return mpz_class(0);
  mpz_class prev(0), cur(1);
  for (u64 i = 1; i < n; ++i) {
    mpz_class next = static_cast<long>(p.a1) * cur + static_cast<long>(p.a2) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// Companion sequence v_0 = 2, v_1 = a1, same recurrence.
inline mpz_class v_exact(const LucasParams& p, u64 n) {
  mpz_class prev(2), cur(static_cast<long>(p.a1));
  if (n == 0) return prev;
  for (u64 i = 1; i < n; ++i) {
    mpz_class next = static_cast<long>(p.a1) * cur + static_cast<long>(p.a2) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

struct LucasPairMod {
  u64 u;
  u64 v;
  u64 n;
  u64 m;
};

// (u_n mod m, v_n mod m) by fast doubling on the state (u_k, u_{k+1}):
//   u_{2k}   = u_k * (2*u_{k+1} - a1*u_k)
//   u_{2k+1} = u_{k+1}^2 + a2*u_k^2
// then v_n = 2*u_{n+1} - a1*u_n. O(log n) products mod m.
//
// Debug builds re-check the companion identity
//   v_n^2 - delta*u_n^2 = 4*(-a2)^n  (mod m)
// after every call.
inline LucasPairMod uv_mod(const LucasParams& p, u64 n, u64 m) {
  if (m == 0) throw std::invalid_argument("uv_mod: modulus must be >= 1");
  const u64 a1m = mod_signed(p.a1, m);
  const u64 a2m = mod_signed(p.a2, m);
  u64 a = 0;          // u_k
  u64 b = 1 % m;      // u_{k+1}
  if (n > 0) {
    for (int i = std::bit_width(n) - 1; i >= 0; --i) {
      const u64 e = mul_mod(a, sub_mod(add_mod(b, b, m), mul_mod(a1m, a, m), m), m);
      const u64 f = add_mod(mul_mod(b, b, m), mul_mod(a2m, mul_mod(a, a, m), m), m);
      if ((n >> i) & 1) {
        a = f;
        b = add_mod(mul_mod(a1m, f, m), mul_mod(a2m, e, m), m);
      } else {
        a = e;
        b = f;
      }
    }
  }
  const u64 v = sub_mod(add_mod(b, b, m), mul_mod(a1m, a, m), m);
  const LucasPairMod r{a, v, n, m};
#ifndef NDEBUG
  {
    const u64 dm = mod_signed(p.delta, m);
    const u64 lhs = sub_mod(mul_mod(r.v, r.v, m),
                            mul_mod(dm, mul_mod(r.u, r.u, m), m), m);
    const u64 na2 = a2m == 0 ? 0 : m - a2m;  // (-a2) mod m
    const u64 rhs = mul_mod(4 % m, pow_mod(na2, n, m), m);
    assert(lhs == rhs && "companion identity violated");
  }
#endif
  return r;
}

}  // namespace lucas
