#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lucas/arith.hpp"
#include "lucas/bounds.hpp"
#include "lucas/oracle.hpp"
#include "lucas/parallel.hpp"
#include "lucas/smooth.hpp"

namespace lucas {

// Exact rational mode recomputes a float sum term by term; keep it small.
inline constexpr u64 kExactTermCap = 10000;

// One summation experiment: the computed value, the reference curve it is
// held against (NaN when x is below the curve's validity range), their
// ratio, and optionally the exact rational total.
struct SumReport {
  LucasParams params{1, 1, 5};
  u64 x = 0;
  u64 horizon = 0;  // 0 when the sum has no horizon
  double epsilon = 0.0;
  double value = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  std::optional<mpq_class> exact;
};

namespace detail {

inline void attach_bound(SumReport& r, double bound) {
  r.bound = bound;
  r.ratio = bound > 0.0 ? r.value / bound : std::numeric_limits<double>::quiet_NaN();
}

// acc += g^k without overflow: u128 fast path, mpz fallback.
inline void add_pow(mpz_class& acc, u64 g, u64 k) {
  if (g == 1) {
    acc += 1;
    return;
  }
  u128 r = 1;
  bool fits = true;
  for (u64 i = 0; i < k; ++i) {
    if (r > ~u128(0) / g) {
      fits = false;
      break;
    }
    r *= g;
  }
  if (fits) {
    mpz_class t(static_cast<unsigned long>(r >> 64));
    t <<= 64;
    t += static_cast<unsigned long>(r & ~u64(0));
    acc += t;
  } else {
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(g),
                  static_cast<unsigned long>(k));
    acc += t;
  }
}

// Decade breakpoints 10, 100, ... below x, then x itself.
inline std::vector<u64> decade_points(u64 x) {
  std::vector<u64> pts;
  for (u64 d = 10; d < x; d *= 10) {
    pts.push_back(d);
    if (d > x / 10) break;
  }
  if (pts.empty() || pts.back() != x) pts.push_back(x);
  return pts;
}

}  // namespace detail

// --- tail of sum 1/ell ----------------------------------------------------
// value = sum over x < m <= X, (m, a2) = 1, of 1/ell(m): a finite lower
// section of the infinite tail, compared against ell_tail_bound.
inline SumReport tail_inv_ell(const RankCache& rc, u64 x, u64 X,
                              double eps = 0.0, bool exact_mode = false,
                              unsigned threads = 0) {
  if (X <= x) raise(errc::horizon_too_small, "horizon X must exceed x");
  if (X > rc.limit())
    raise(errc::rank_unavailable,
          "rank cache covers m <= " + std::to_string(rc.limit()));
  SumReport r;
  r.params = rc.params();
  r.x = x;
  r.horizon = X;
  r.epsilon = eps;
  const LucasParams& p = rc.params();
  r.value = chunked_sum(x + 1, X + 1, threads, [&](u64 m) {
    return coprime_to_a2(p, m) ? 1.0 / static_cast<double>(rc.ell_of(m)) : 0.0;
  });
  if (exact_mode) {
    if (X - x > kExactTermCap)
      raise(errc::out_of_validity_range,
            "exact mode capped at " + std::to_string(kExactTermCap) + " terms");
    oracle::RationalAccumulator acc;
    for (u64 m = x + 1; m <= X; ++m)
      if (coprime_to_a2(p, m)) acc.add(1, rc.ell_of(m));
    r.exact = acc.value();
  }
  if (x >= 16) detail::attach_bound(r, ell_tail_bound(static_cast<double>(x), eps));
  return r;
}

// --- tail of sum 1/L ------------------------------------------------------
// Same shape over all n (L is defined without a coprimality condition),
// compared against L_tail_bound.
inline SumReport tail_inv_L(const RankCache& rc, u64 x, u64 X,
                            double eps = 0.0, bool exact_mode = false,
                            unsigned threads = 0) {
  if (X <= x) raise(errc::horizon_too_small, "horizon X must exceed x");
  if (X > rc.limit())
    raise(errc::rank_unavailable,
          "rank cache covers n <= " + std::to_string(rc.limit()));
  SumReport r;
  r.params = rc.params();
  r.x = x;
  r.horizon = X;
  r.epsilon = eps;
  r.value = chunked_sum(x + 1, X + 1, threads, [&](u64 n) {
    return 1.0 / static_cast<double>(rc.L_of(n));
  });
  if (exact_mode) {
    if (X - x > kExactTermCap)
      raise(errc::out_of_validity_range,
            "exact mode capped at " + std::to_string(kExactTermCap) + " terms");
    oracle::RationalAccumulator acc;
    for (u64 n = x + 1; n <= X; ++n) acc.add(1, rc.L_of(n));
    r.exact = acc.value();
  }
  if (x >= 1) detail::attach_bound(r, L_tail_bound(static_cast<double>(x), eps));
  return r;
}

// --- moments of g ----------------------------------------------------------
// sum_{n <= x} g(n)^k, exact (the integer rides along in `exact`), against
// moment_bound.
inline SumReport moment_gk(const LucasParams& p, u64 x, u64 k,
                           unsigned threads = 0) {
  if (x == 0) throw std::invalid_argument("moment_gk: x must be >= 1");
  if (k == 0) throw std::invalid_argument("moment_gk: k must be >= 1");
  const auto partials =
      map_chunks<mpz_class>(1, x + 1, threads, [&](u64 lo, u64 hi) {
        mpz_class acc(0);
        for (u64 n = lo; n < hi; ++n)
          detail::add_pow(acc, gcd_un(p, n), k);
        return acc;
      });
  mpz_class total(0);
  for (const auto& part : partials) total += part;
  SumReport r;
  r.params = p;
  r.x = x;
  r.value = total.get_d();
  r.exact = mpq_class(total);
  if (x >= 16) detail::attach_bound(r, moment_bound(static_cast<double>(x), k));
  return r;
}

// Same moment through the divisor-sum identity
//   sum_{n<=x} g(n)^k = sum_{d<=x, (d,a2)=1} J_k(d) * floor(x / ell(d)),
// used as a structural cross-check against moment_gk.
inline mpz_class moment_via_jordan(const RankCache& rc, u64 x, u64 k) {
  if (x == 0 || k == 0)
    throw std::invalid_argument("moment_via_jordan: x and k must be >= 1");
  if (x > rc.limit())
    raise(errc::rank_unavailable,
          "rank cache covers d <= " + std::to_string(rc.limit()));
  const LucasParams& p = rc.params();
  mpz_class acc(0);
  for (u64 d = 1; d <= x; ++d) {
    if (!coprime_to_a2(p, d)) continue;
    const u64 jk = jordan_totient(static_cast<u32>(k), factorize(d, rc.spf()));
    const u64 quot = x / rc.ell_of(d);
    if (quot == 0) continue;
    mpz_class term(static_cast<unsigned long>(jk));
    term *= static_cast<unsigned long>(quot);
    acc += term;
  }
  return acc;
}

// --- logarithmic moments ----------------------------------------------------
// sum_{n <= x} (log g(n))^lambda, with per-decade running means value/d
// (the plot that makes the linear growth in x visible).
struct LogMomentReport {
  SumReport sum;
  u64 lambda = 1;
  std::vector<std::pair<u64, double>> decade_mean;
};

inline LogMomentReport log_moment(const LucasParams& p, u64 x, u64 lambda,
                                  unsigned threads = 0) {
  if (x == 0) throw std::invalid_argument("log_moment: x must be >= 1");
  if (lambda == 0) throw std::invalid_argument("log_moment: lambda must be >= 1");
  LogMomentReport rep;
  rep.lambda = lambda;
  rep.sum.params = p;
  rep.sum.x = x;
  const auto term = [&](u64 n) {
    const u64 g = gcd_un(p, n);
    if (g == 1) return 0.0;
    const double lg = std::log(static_cast<double>(g));
    double t = lg;
    for (u64 i = 1; i < lambda; ++i) t *= lg;
    return t;
  };
  KahanSum cum;
  u64 prev = 0;
  for (u64 d : detail::decade_points(x)) {
    cum.add(chunked_sum(prev + 1, d + 1, threads, term));
    rep.decade_mean.emplace_back(d, cum.value() / static_cast<double>(d));
    prev = d;
  }
  rep.sum.value = cum.value();
  return rep;
}

// --- distribution of large g ------------------------------------------------
// count = #{ n <= x : g(n) > y }, against dist_count_bound; the report also
// carries the y-range [dist_crossover_min_y(x), x] where that curve is the
// sharper one.
struct DistReport {
  LucasParams params{1, 1, 5};
  u64 x = 0;
  u64 y = 0;
  u64 count = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double y_range_lo = std::numeric_limits<double>::quiet_NaN();
  double y_range_hi = std::numeric_limits<double>::quiet_NaN();
};

inline DistReport dist_count(const LucasParams& p, u64 x, u64 y,
                             unsigned threads = 0) {
  if (x == 0) throw std::invalid_argument("dist_count: x must be >= 1");
  if (y == 0) throw std::invalid_argument("dist_count: y must be >= 1");
  DistReport r;
  r.params = p;
  r.x = x;
  r.y = y;
  r.count = chunked_count(1, x + 1, threads,
                          [&](u64 n) { return gcd_un(p, n) > y; });
  if (x >= 16) {
    r.bound = dist_count_bound(static_cast<double>(x), static_cast<double>(y));
    r.ratio = r.bound > 0.0 ? static_cast<double>(r.count) / r.bound
                            : std::numeric_limits<double>::quiet_NaN();
    r.y_range_lo = dist_crossover_min_y(static_cast<double>(x));
    r.y_range_hi = static_cast<double>(x);
  }
  return r;
}

// --- partition by greatest prime factor -------------------------------------
// Every n <= x lands in exactly one class, tested in priority order
// (P = gpf(n), y defaults to exp((1/2) sqrt(log x log log x))):
//   1: P does not divide u_n
//   2: P <= y                      (smooth)
//   3: P > y^6 and z(P) <= P^{1/3} (large gpf of unusually small rank)
//   4: P > y^6, not class 3
//   5: everything else             (y < P <= y^6)
// Masses are exact sums of g(n)^k within each class; counts sum to x and
// masses sum to the k-th moment.
struct PartitionReport {
  LucasParams params{1, 1, 5};
  u64 x = 0;
  u64 k = 1;
  double y = 0.0;
  std::array<u64, 5> counts{};
  std::array<mpz_class, 5> masses{};
};

inline PartitionReport partition_classes(const RankCache& rc,
                                         const SmoothSieve& ss, u64 x, u64 k,
                                         std::optional<double> y_override = {},
                                         unsigned threads = 0) {
  if (x == 0) throw std::invalid_argument("partition_classes: x must be >= 1");
  if (k == 0) throw std::invalid_argument("partition_classes: k must be >= 1");
  if (x > rc.limit())
    raise(errc::rank_unavailable,
          "rank cache covers n <= " + std::to_string(rc.limit()));
  if (x > ss.limit)
    throw std::invalid_argument("partition_classes: smooth sieve too small");
  double y;
  if (y_override) {
    y = *y_override;
    if (!(y >= 1.0))
      throw std::invalid_argument("partition_classes: y must be >= 1");
  } else {
    if (x < 16)
      raise(errc::out_of_validity_range,
            "default y needs x >= 16; pass y explicitly below that");
    y = std::exp(0.5 * sqrt_log_loglog(static_cast<double>(x)));
  }
  const LucasParams& p = rc.params();
  const long double y6 = std::pow(static_cast<long double>(y), 6.0L);

  struct Part {
    std::array<u64, 5> counts{};
    std::array<mpz_class, 5> masses{};
  };
  const auto partials = map_chunks<Part>(1, x + 1, threads, [&](u64 lo, u64 hi) {
    Part part;
    for (u64 n = lo; n < hi; ++n) {
      const u64 gp = ss.gpf[n];
      int cls;
      if (gp > 1 && uv_mod(p, n, gp).u != 0) {
        cls = 0;
      } else if (static_cast<double>(gp) <= y) {
        cls = 1;
      } else if (static_cast<long double>(gp) > y6) {
        bool low_rank = false;
        if (coprime_to_a2(p, gp)) {
          const u64 zp = rc.z_of_prime_power(gp);
          low_rank = static_cast<long double>(zp) <=
                     std::pow(static_cast<long double>(gp), 1.0L / 3.0L);
        }
        cls = low_rank ? 2 : 3;
      } else {
        cls = 4;
      }
      ++part.counts[cls];
      detail::add_pow(part.masses[cls], gcd_un(p, n), k);
    }
    return part;
  });
  PartitionReport rep;
  rep.params = p;
  rep.x = x;
  rep.k = k;
  rep.y = y;
  for (const auto& part : partials) {
    for (int c = 0; c < 5; ++c) {
      rep.counts[c] += part.counts[c];
      rep.masses[c] += part.masses[c];
    }
  }
  return rep;
}

// --- density of L(n) / ell(n) > C -------------------------------------------
// Counts n <= x, (n, a2) = 1, with L(n) > C * ell(n), tracking the running
// proportion per decade. The proportion climbing toward 1 is the expected
// picture: for almost all n the two scales differ by any fixed factor.
struct RatioDensityReport {
  LucasParams params{1, 1, 5};
  u64 x = 0;
  double C = 2.0;
  u64 count = 0;
  double proportion = 0.0;
  std::vector<std::pair<u64, double>> decades;
};

inline RatioDensityReport ratio_density(const RankCache& rc, u64 x, double C,
                                        unsigned threads = 0) {
  if (x == 0) throw std::invalid_argument("ratio_density: x must be >= 1");
  if (!(C >= 1.0)) throw std::invalid_argument("ratio_density: C must be >= 1");
  if (x > rc.limit())
    raise(errc::rank_unavailable,
          "rank cache covers n <= " + std::to_string(rc.limit()));
  const LucasParams& p = rc.params();
  const auto pred = [&](u64 n) {
    if (!coprime_to_a2(p, n)) return false;
    return static_cast<long double>(rc.L_of(n)) >
           static_cast<long double>(C) * static_cast<long double>(rc.ell_of(n));
  };
  RatioDensityReport rep;
  rep.params = p;
  rep.x = x;
  rep.C = C;
  u64 cum = 0;
  u64 prev = 0;
  for (u64 d : detail::decade_points(x)) {
    cum += chunked_count(prev + 1, d + 1, threads, pred);
    rep.decades.emplace_back(d, static_cast<double>(cum) / static_cast<double>(d));
    prev = d;
  }
  rep.count = cum;
  rep.proportion = static_cast<double>(cum) / static_cast<double>(x);
  return rep;
}

// --- Dirichlet series of n/L(n) ----------------------------------------------
// alpha(s) = sum_{n >= 1} n^{1-s} / L(n), converging for s > 2/3. Two
// independent finite views: the direct sum to N, and the Euler product over
// primes q <= P. At primes q coprime to 2*a2*delta the local factor
// collapses to 1 + 1 / (z(q) (q^s - 1)); at the finitely many others it is
// summed term by term to 1e-15.
struct AlphaReport {
  LucasParams params{1, 1, 5};
  double s = 2.0;
  u64 direct_horizon = 0;
  u64 prime_horizon = 0;
  double direct = 0.0;
  double product = 0.0;
};

namespace detail {

inline double alpha_local_factor(const RankCache& rc, u64 q, double s) {
  const LucasParams& p = rc.params();
  const bool divides_a2 = abs_u64(p.a2) % q == 0;
  const double qs = std::pow(static_cast<double>(q), -s);
  double factor = 1.0;
  double qks = 1.0;  // q^{-ks}
  u64 qk = 1;
  u64 zk = 0;
  for (u32 k = 1;; ++k) {
    if (qk > std::numeric_limits<u64>::max() / q) break;
    qk *= q;
    qks *= qs;
    double f;  // q^k / L(q^k) = gcd(q^k, z(q^k)) / z(q^k) when q coprime to a2
    if (divides_a2) {
      f = 1.0;
    } else {
      if (k == 1) {
        zk = rc.z_of_prime_power(q);
      } else {
        u32 attempts = 0;
        while (uv_mod(p, zk, qk).u != 0) {
          if (++attempts > 64)
            raise(errc::lift_failed,
                  "rank lift stalled at prime power " + std::to_string(qk));
          zk = checked_mul(zk, q);
        }
      }
      f = static_cast<double>(std::gcd(qk, zk)) / static_cast<double>(zk);
    }
    const double term = f * qks;
    factor += term;
    if (term < 1e-15) break;
  }
  return factor;
}

}  // namespace detail

inline AlphaReport alpha_partial(const RankCache& rc, double s, u64 N, u64 P,
                                 unsigned threads = 0) {
  if (!(s > 2.0 / 3.0))
    raise(errc::divergent_parameter, "alpha(s) needs s > 2/3");
  if (N == 0) throw std::invalid_argument("alpha_partial: N must be >= 1");
  if (P < 2) throw std::invalid_argument("alpha_partial: P must be >= 2");
  if (N > rc.limit() || P > rc.limit())
    raise(errc::rank_unavailable,
          "rank cache covers values <= " + std::to_string(rc.limit()));
  AlphaReport rep;
  rep.params = rc.params();
  rep.s = s;
  rep.direct_horizon = N;
  rep.prime_horizon = P;
  rep.direct = chunked_sum(1, N + 1, threads, [&](u64 n) {
    return std::pow(static_cast<double>(n), 1.0 - s) /
           static_cast<double>(rc.L_of(n));
  });
  const LucasParams& p = rc.params();
  const u64 a2 = abs_u64(p.a2);
  const u64 delta = abs_u64(p.delta);
  double product = 1.0;
  for (u32 q : rc.spf().primes) {
    if (q > P) break;
    const bool special = q == 2 || a2 % q == 0 || delta % q == 0;
    if (special) {
      product *= detail::alpha_local_factor(rc, q, s);
    } else {
      const u64 zq = rc.z_of_prime_power(q);
      product *= 1.0 + 1.0 / (static_cast<double>(zq) *
                              (std::pow(static_cast<double>(q), s) - 1.0));
    }
  }
  rep.product = product;
  return rep;
}

}  // namespace lucas
