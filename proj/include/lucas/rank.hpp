#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lucas/factorize.hpp"
#include "lucas/parallel.hpp"
#include "lucas/params.hpp"
#include "lucas/sequence.hpp"

namespace lucas {

// Rank of appearance of m: the least n >= 1 with m | u_n. Defined exactly
// for m coprime to a2 (z(1) = 1).
struct RankRecord {
  u64 m = 1;
  u64 z = 1;
};

// z(q) for every prime q <= limit coprime to a2, sorted by q. Primes
// dividing a2 are absent, not zero-filled.
struct RankTable {
  LucasParams params{1, 1, 5};
  u64 limit = 0;
  std::vector<std::pair<u64, u64>> entries;

  std::optional<u64> lookup(u64 q) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), q,
        [](const std::pair<u64, u64>& e, u64 v) { return e.first < v; });
    if (it != entries.end() && it->first == q) return it->second;
    return std::nullopt;
  }
};

namespace detail {

// Direct scan of u_n mod q; bound 4*q^2 steps. Exceeding the bound means a
// structural assumption broke, not bad input.
inline u64 z_by_scan(const LucasParams& p, u64 q) {
  const u64 a1m = mod_signed(p.a1, q);
  const u64 a2m = mod_signed(p.a2, q);
  u64 prev = 0, cur = 1 % q;
  const u128 bound = 4 * static_cast<u128>(q) * q;
  for (u128 n = 1; n <= bound; ++n) {
    if (cur == 0) return static_cast<u64>(n);
    const u64 next = add_mod(mul_mod(a1m, cur, q), mul_mod(a2m, prev, q), q);
    prev = cur;
    cur = next;
  }
  raise(errc::scan_exhausted,
        "no zero residue within 4*q^2 steps at q = " + std::to_string(q));
}

// q | u_{n0} must already hold; divides n0 down by prime factors while the
// divisibility survives, landing on the least index.
inline u64 strip_factors(const LucasParams& p, u64 q, u64 n0,
                         const std::vector<std::pair<u64, u32>>& fac) {
  u64 n = n0;
  for (const auto& [r, e] : fac) {
    for (u32 i = 0; i < e; ++i) {
      if (n % r != 0) break;
      const u64 cand = n / r;
      if (uv_mod(p, cand, q).u != 0) break;
      n = cand;
    }
  }
  return n;
}

template <class FactorFn>
u64 z_prime_impl(const LucasParams& p, u64 q, FactorFn&& factor) {
  // For q coprime to 2*a2*delta the rank divides q - (delta|q); stripping
  // prime factors of that index finds the minimum in O(log q) modular
  // steps. Small q and q | 2*delta fall back to the scan.
  if (q < 50 || abs_u64(p.delta) % q == 0) return z_by_scan(p, q);
  const int chi = legendre(p.delta, q);
  const u64 n0 = chi == 1 ? q - 1 : q + 1;
  const u64 z = strip_factors(p, q, n0, factor(n0));
  if (uv_mod(p, z, q).u != 0)
    throw std::logic_error("z_prime: q does not divide u_{q - (delta|q)}");
  return z;
}

}  // namespace detail

inline RankRecord z_prime(const LucasParams& p, u64 q) {
  if (!is_prime_u64(q)) throw std::invalid_argument("z_prime: q must be prime");
  if (!coprime_to_a2(p, q)) raise(errc::not_coprime, "q divides a2");
  const u64 zq = detail::z_prime_impl(
      p, q, [](u64 n0) { return factorize(n0).factors; });
  return {q, zq};
}

// z(q^k) by lifting: the quotient z(q^j)/z(q^{j-1}) is 1 or q, so at each
// level multiply by q until q^j | u_n, with a hard cap of k attempts.
namespace detail {

inline u64 z_lift(const LucasParams& p, u64 q, u32 k, u64 z1) {
  u64 z = z1;
  u64 qj = q;
  for (u32 j = 2; j <= k; ++j) {
    qj = checked_mul(qj, q);
    u64 cand = z;
    u32 attempts = 0;
    while (uv_mod(p, cand, qj).u != 0) {
      if (++attempts > k)
        raise(errc::lift_failed, "rank lift stalled at " + std::to_string(q) +
                                     "^" + std::to_string(j));
      cand = checked_mul(cand, q);
    }
    z = cand;
  }
  return z;
}

}  // namespace detail

inline RankRecord z_prime_power(const LucasParams& p, u64 q, u32 k) {
  if (k == 0) throw std::invalid_argument("z_prime_power: k must be >= 1");
  const u64 z1 = z_prime(p, q).z;
  return {checked_pow(q, k), detail::z_lift(p, q, k, z1)};
}

// z(m) for arbitrary m coprime to a2: lcm over the prime powers of m.
inline RankRecord z(const LucasParams& p, u64 m) {
  if (m == 0) throw std::invalid_argument("z: m must be positive");
  if (!coprime_to_a2(p, m)) raise(errc::not_coprime, "m shares a factor with a2");
  if (m == 1) return {1, 1};
  u64 acc = 1;
  for (const auto& [q, e] : factorize(m).factors) {
    const u64 z1 = z_prime(p, q).z;
    acc = lcm_u64(acc, detail::z_lift(p, q, e, z1));
  }
  return {m, acc};
}

// Bulk table of z(q) for all primes q <= limit coprime to a2. The
// factorizations of q -+ 1 come from a shared spf sieve; work is chunked
// over prime indices, and results are position-written, so the table is
// identical for every thread count.
inline RankTable rank_sieve_with(const LucasParams& p, u64 limit,
                                 const SpfSieve& spf, unsigned threads = 0) {
  if (limit < 2) throw std::invalid_argument("rank_sieve: limit must be >= 2");
  if (spf.limit < limit + 1)
    throw std::invalid_argument("rank_sieve: spf sieve must cover limit + 1");
  std::vector<u32> qs;
  qs.reserve(spf.primes.size());
  for (u32 q : spf.primes)
    if (q <= limit) qs.push_back(q);
  std::vector<u64> zs(qs.size(), 0);  // 0 marks q | a2
  for_chunks(0, qs.size(), threads, [&](u64, u64 lo, u64 hi) {
    for (u64 i = lo; i < hi; ++i) {
      const u64 q = qs[i];
      if (!coprime_to_a2(p, q)) continue;
      zs[i] = detail::z_prime_impl(
          p, q, [&](u64 n0) { return factorize(n0, spf).factors; });
    }
  });
  RankTable t;
  t.params = p;
  t.limit = limit;
  t.entries.reserve(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (zs[i]) t.entries.emplace_back(qs[i], zs[i]);
  return t;
}

inline RankTable rank_sieve(const LucasParams& p, u64 limit,
                            unsigned threads = 0) {
  const SpfSieve spf = SpfSieve::build(limit + 1);
  return rank_sieve_with(p, limit, spf, threads);
}

// Tabulated primes q <= x whose rank is small: z(q) <= q^gamma, compared
// against the reference curve x^{2*gamma} / (gamma * log x).
struct QGammaReport {
  u64 x = 0;
  double gamma = 0.0;
  u64 count = 0;
  std::vector<u64> members;
  double bound = 0.0;
  double ratio = 0.0;
};

inline QGammaReport q_gamma_count(const RankTable& t, u64 x, double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("q_gamma_count: gamma must lie in (0, 1]");
  if (x < 2) throw std::invalid_argument("q_gamma_count: x must be >= 2");
  if (t.limit < x)
    raise(errc::rank_unavailable, "rank table covers primes up to " +
                                      std::to_string(t.limit) + " < x");
  QGammaReport r;
  r.x = x;
  r.gamma = gamma;
  for (const auto& [q, zq] : t.entries) {
    if (q > x) break;
    if (static_cast<long double>(zq) <=
        std::pow(static_cast<long double>(q), static_cast<long double>(gamma))) {
      ++r.count;
      r.members.push_back(q);
    }
  }
  r.bound = std::pow(static_cast<double>(x), 2.0 * gamma) /
            (gamma * std::log(static_cast<double>(x)));
  r.ratio = static_cast<double>(r.count) / r.bound;
  return r;
}

// Precomputed ranks for every prime power <= limit, with derived values of
//   z(m)    lcm of z over the prime powers of m   (m coprime to a2)
//   ell(m)  lcm(m, z(m))                          (m coprime to a2)
//   L(n)    multiplicative companion: product of ell(q^k) over q^k || n,
//           with the bare q^k at primes dividing a2 (defined for all n).
// Immutable after construction; lookups are plain array reads, safe to
// share across worker threads.
class RankCache {
 public:
  RankCache(const LucasParams& p, u64 limit, unsigned threads = 0)
      : params_(p),
        limit_(limit),
        spf_(SpfSieve::build(limit + 1)),
        table_(rank_sieve_with(p, limit, spf_, threads)) {
    build_power_ranks();
  }

  // Adopts a precomputed table (for example one loaded from disk).
  RankCache(const LucasParams& p, u64 limit, RankTable table,
            unsigned threads = 0)
      : params_(p), limit_(limit), spf_(SpfSieve::build(limit + 1)) {
    (void)threads;
    if (table.params.a1 != p.a1 || table.params.a2 != p.a2)
      raise(errc::bad_table, "rank table was built for different coefficients");
    if (table.limit < limit)
      raise(errc::rank_unavailable,
            "rank table covers primes up to " + std::to_string(table.limit) +
                ", need " + std::to_string(limit));
    table_ = std::move(table);
    build_power_ranks();
  }

  const LucasParams& params() const { return params_; }
  u64 limit() const { return limit_; }
  const RankTable& table() const { return table_; }
  const SpfSieve& spf() const { return spf_; }

  // z(q^k) for a prime power q^k <= limit with q coprime to a2.
  u64 z_of_prime_power(u64 qk) const { return power_rank_[qk]; }

  u64 z_of(u64 m) const {
    if (m == 0 || m > limit_)
      raise(errc::rank_unavailable, "m outside cache range");
    if (!coprime_to_a2(params_, m))
      raise(errc::not_coprime, "m shares a factor with a2");
    u64 acc = 1;
    u64 rem = m;
    while (rem > 1) {
      const u64 q = spf_.spf[rem];
      u64 qk = 1;
      while (rem % q == 0) {
        rem /= q;
        qk *= q;
      }
      acc = lcm_u64(acc, power_rank_[qk]);
    }
    return acc;
  }

  u64 ell_of(u64 m) const { return lcm_u64(m, z_of(m)); }

  u64 L_of(u64 n) const {
    if (n == 0 || n > limit_)
      raise(errc::rank_unavailable, "n outside cache range");
    const u64 a2 = abs_u64(params_.a2);
    u64 acc = 1;
    u64 rem = n;
    while (rem > 1) {
      const u64 q = spf_.spf[rem];
      u64 qk = 1;
      while (rem % q == 0) {
        rem /= q;
        qk *= q;
      }
      const u64 term = a2 % q == 0 ? qk : lcm_u64(qk, power_rank_[qk]);
      acc = checked_mul(acc, term);
    }
    return acc;
  }

 private:
  void build_power_ranks() {
    power_rank_.assign(limit_ + 1, 0);
    for (const auto& [q, zq] : table_.entries) {
      if (q > limit_) break;
      power_rank_[q] = static_cast<u32>(zq);
      u64 qj = q;
      u64 zj = zq;
      while (qj <= limit_ / q) {
        qj *= q;
        u64 cand = zj;
        u32 attempts = 0;
        while (uv_mod(params_, cand, qj).u != 0) {
          if (++attempts > 64)
            raise(errc::lift_failed,
                  "rank lift stalled at prime power " + std::to_string(qj));
          cand = checked_mul(cand, q);
        }
        power_rank_[qj] = static_cast<u32>(cand);
        zj = cand;
      }
    }
  }

  LucasParams params_{1, 1, 5};
  u64 limit_ = 0;
  SpfSieve spf_;
  RankTable table_;
  std::vector<u32> power_rank_;
};

}  // namespace lucas
