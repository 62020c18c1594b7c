#pragma once

#include <numeric>
#include <stdexcept>

#include "lucas/rank.hpp"

namespace lucas {

// g(n) = gcd(n, u_n), defined for every n >= 1 (no coprimality condition:
// only the residue u_n mod n is needed).
inline u64 gcd_un(const LucasParams& p, u64 n) {
  if (n == 0) throw std::invalid_argument("gcd_un: n must be positive");
  return std::gcd(n, uv_mod(p, n, n).u);
}

// ell(m) = lcm(m, z(m)) for m coprime to a2. m | gcd(n, u_n) holds iff
// ell(m) | n, which makes ell the natural index scale for divisor sums
// over g(n) = gcd(n, u_n).
inline u64 ell(const LucasParams& p, u64 m) { return lcm_u64(m, z(p, m).z); }

// Multiplicative companion of ell: product over prime powers q^k || n of
// ell(q^k), with the bare q^k at primes dividing a2. Agrees with ell on
// prime powers, dominates it elsewhere (ell(n) | L(n)).
inline u64 ell_mult(const LucasParams& p, const Factorization& f) {
  const u64 a2 = abs_u64(p.a2);
  u64 acc = 1;
  for (const auto& [q, e] : f.factors) {
    const u64 qk = checked_pow(q, e);
    const u64 term =
        a2 % q == 0 ? qk : lcm_u64(qk, z_prime_power(p, q, e).z);
    acc = checked_mul(acc, term);
  }
  return acc;
}

inline u64 ell_mult(const LucasParams& p, u64 n) {
  if (n == 0) throw std::invalid_argument("ell_mult: n must be positive");
  return ell_mult(p, factorize(n));
}

// Jordan totient J_k(n) = n^k * prod_{q | n} (1 - q^{-k}) as an exact
// integer: product of q^{k(e-1)} * (q^k - 1) over prime powers.
inline u64 jordan_totient(u32 k, const Factorization& f) {
  if (k == 0) throw std::invalid_argument("jordan_totient: k must be >= 1");
  u64 acc = 1;
  for (const auto& [q, e] : f.factors) {
    const u64 qk = checked_pow(q, k);
    const u64 term = checked_mul(checked_pow(qk, e - 1), qk - 1);
    acc = checked_mul(acc, term);
  }
  return acc;
}

inline u64 jordan_totient(u32 k, u64 n) {
  if (n == 0) throw std::invalid_argument("jordan_totient: n must be positive");
  return jordan_totient(k, factorize(n));
}

}  // namespace lucas
