#pragma once

#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lucas/rank_io.hpp"
#include "lucas/report.hpp"
#include "lucas/sums.hpp"

namespace lucas {

// Everything a run needs, already parsed. run() validates against the
// chosen command's preconditions before any heavy computation starts.
// Zero / negative / empty mean "use the command default".
struct RunConfig {
  i64 a1 = 1;
  i64 a2 = 1;
  std::string command;
  u64 m = 0;        // rank
  u64 x = 0;
  u64 horizon = 0;  // X; default 100 * x
  double y = -1.0;
  u64 k = 1;
  u64 lambda = 1;
  double gamma = 1.0 / 3.0;
  std::optional<double> epsilon;  // unset: 0, except tails-ell emits a curve
  double C = 2.0;
  double s = 2.0;
  u64 N = 0;      // alpha direct horizon; default 10^6
  u64 P = 0;      // alpha prime horizon; default 10^5
  u64 limit = 0;  // sieve / verify
  std::string output;  // handled by the caller; run() takes a stream
  ReportFormat format = ReportFormat::json;
  bool exact = false;
  unsigned threads = 0;  // 0: LUCASRANK_THREADS or hardware
  std::string rank_table;  // load instead of building
  std::string out_table;   // sieve: where to save
  bool timing = false;     // measure runtime_ms (default stamps 0 so the
                           // stream is byte-identical run to run)
};

namespace cli_detail {

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled) {}

  i64 ms() const {
    if (!enabled_) return 0;
    const auto dt = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration_cast<std::chrono::milliseconds>(dt).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline RankCache make_cache(const RunConfig& cfg, const LucasParams& p,
                            u64 needed) {
  if (!cfg.rank_table.empty()) {
    RankTable t = load_rank_table(cfg.rank_table);
    return RankCache(p, needed, std::move(t), cfg.threads);
  }
  return RankCache(p, needed, cfg.threads);
}

inline Record frame(const std::string& experiment, const LucasParams& p, u64 x,
                    std::optional<u64> k_or_lambda, double epsilon, double value,
                    std::optional<std::string> exact, double bound, double ratio,
                    u64 horizon, std::optional<double> y, i64 runtime_ms) {
  SumReport r;
  r.params = p;
  r.x = x;
  r.horizon = horizon;
  r.epsilon = epsilon;
  r.value = value;
  r.bound = bound;
  r.ratio = ratio;
  Record rec = sum_record(experiment, r, k_or_lambda, y, runtime_ms);
  rec["exact"] = exact ? Record(*exact) : Record(nullptr);
  return rec;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline void cmd_rank(const RunConfig& cfg, const LucasParams& p,
                     RecordWriter& w, const Stopwatch& sw) {
  if (cfg.m == 0) throw std::invalid_argument("rank: --m is required");
  const u64 zm = z(p, cfg.m).z;
  const u64 ellm = lcm_u64(cfg.m, zm);
  const u64 Lm = ell_mult(p, cfg.m);
  Record rec = frame("rank", p, cfg.m, {}, 0.0, static_cast<double>(zm), {},
                     kNaN, kNaN, 0, {}, sw.ms());
  rec["z"] = zm;
  rec["ell"] = ellm;
  rec["L"] = Lm;
  w.write(rec);
}

inline void cmd_sieve(const RunConfig& cfg, const LucasParams& p,
                      RecordWriter& w, std::ostream& diag, const Stopwatch& sw) {
  if (cfg.limit < 2) throw std::invalid_argument("sieve: --limit must be >= 2");
  if (cfg.out_table.empty())
    throw std::invalid_argument("sieve: --out-table is required");
  const RankTable t = rank_sieve(p, cfg.limit, cfg.threads);
  save_rank_table(t, cfg.out_table);
  diag << "wrote " << t.entries.size() << " prime ranks to " << cfg.out_table
       << "\n";
  Record rec = frame("sieve", p, cfg.limit, {}, 0.0,
                     static_cast<double>(t.entries.size()), {}, kNaN, kNaN, 0,
                     {}, sw.ms());
  rec["count"] = t.entries.size();
  rec["path"] = cfg.out_table;
  w.write(rec);
}

inline void cmd_qgamma(const RunConfig& cfg, const LucasParams& p,
                       RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 1000;
  RankTable table;
  if (!cfg.rank_table.empty()) {
    table = load_rank_table(cfg.rank_table);
    if (table.params.a1 != p.a1 || table.params.a2 != p.a2)
      raise(errc::bad_table, "rank table was built for different coefficients");
  } else {
    table = rank_sieve(p, x, cfg.threads);
  }
  const QGammaReport r = q_gamma_count(table, x, cfg.gamma);
  Record rec = frame("qgamma", p, x, {}, 0.0, static_cast<double>(r.count), {},
                     r.bound, r.ratio, 0, {}, sw.ms());
  rec["gamma"] = r.gamma;
  rec["members"] = r.members;
  w.write(rec);
}

inline void cmd_moments(const RunConfig& cfg, const LucasParams& p,
                        RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 1000;
  const SumReport r = moment_gk(p, x, cfg.k, cfg.threads);
  w.write(sum_record("moments", r, cfg.k, {}, sw.ms()));
}

inline void cmd_logmoments(const RunConfig& cfg, const LucasParams& p,
                           RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 1000;
  const LogMomentReport r = log_moment(p, x, cfg.lambda, cfg.threads);
  for (const auto& [d, mean] : r.decade_mean) {
    Record rec = frame("logmoments", p, d, cfg.lambda, 0.0,
                       mean * static_cast<double>(d), {}, kNaN, kNaN, 0, {},
                       sw.ms());
    rec["m_estimate"] = mean;
    w.write(rec);
  }
}

inline void cmd_dist(const RunConfig& cfg, const LucasParams& p,
                     RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 1000;
  const u64 y = cfg.y >= 1.0 ? static_cast<u64>(cfg.y) : 2;
  const DistReport r = dist_count(p, x, y, cfg.threads);
  Record rec = frame("dist", p, x, {}, 0.0, static_cast<double>(r.count), {},
                     r.bound, r.ratio, 0, static_cast<double>(y), sw.ms());
  rec["count"] = r.count;
  rec["y_range_lo"] = json_num(r.y_range_lo);
  rec["y_range_hi"] = json_num(r.y_range_hi);
  w.write(rec);
}

inline void cmd_tails(const RunConfig& cfg, const LucasParams& p, bool mult,
                      RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 100;
  const u64 X = cfg.horizon ? cfg.horizon : checked_mul(x, 100);
  if (X <= x) raise(errc::horizon_too_small, "horizon X must exceed x");
  const RankCache rc = make_cache(cfg, p, X);
  std::vector<double> eps_curve;
  if (cfg.epsilon) {
    eps_curve.push_back(*cfg.epsilon);
  } else if (!mult) {
    eps_curve = {0.0, 0.01, 0.05};  // slack curve for the exp-shaped tail
  } else {
    eps_curve.push_back(0.0);
  }
  SumReport base = mult ? tail_inv_L(rc, x, X, eps_curve[0], cfg.exact, cfg.threads)
                        : tail_inv_ell(rc, x, X, eps_curve[0], cfg.exact, cfg.threads);
  const char* name = mult ? "tails-L" : "tails-ell";
  w.write(sum_record(name, base, {}, {}, sw.ms()));
  for (std::size_t i = 1; i < eps_curve.size(); ++i) {
    SumReport r = base;  // same value; only the reference curve moves
    r.epsilon = eps_curve[i];
    if (x >= 16) {
      const double b = ell_tail_bound(static_cast<double>(x), eps_curve[i]);
      r.bound = b;
      r.ratio = b > 0.0 ? r.value / b : kNaN;
    }
    w.write(sum_record(name, r, {}, {}, sw.ms()));
  }
}

inline void cmd_partition(const RunConfig& cfg, const LucasParams& p,
                          RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 10000;
  const RankCache rc = make_cache(cfg, p, x);
  const SmoothSieve ss = SmoothSieve::build(x);
  std::optional<double> y;
  if (cfg.y >= 0.0) y = cfg.y;
  const PartitionReport r =
      partition_classes(rc, ss, x, cfg.k, y, cfg.threads);
  mpz_class total(0);
  for (const auto& mass : r.masses) total += mass;
  Record rec = frame("partition", p, x, cfg.k, 0.0, total.get_d(),
                     total.get_str(), kNaN, kNaN, 0, r.y, sw.ms());
  rec["counts"] = r.counts;
  std::vector<std::string> masses;
  masses.reserve(5);
  for (const auto& mass : r.masses) masses.push_back(mass.get_str());
  rec["masses"] = masses;
  w.write(rec);
}

inline void cmd_ratio_density(const RunConfig& cfg, const LucasParams& p,
                              RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 1000;
  const RankCache rc = make_cache(cfg, p, x);
  const RatioDensityReport r = ratio_density(rc, x, cfg.C, cfg.threads);
  for (const auto& [d, prop] : r.decades) {
    Record rec = frame("ratio-density", p, d, {}, 0.0, prop, {}, kNaN, kNaN, 0,
                       {}, sw.ms());
    rec["C"] = r.C;
    w.write(rec);
  }
}

inline void cmd_alpha(const RunConfig& cfg, const LucasParams& p,
                      RecordWriter& w, const Stopwatch& sw) {
  if (!(cfg.s > 2.0 / 3.0))
    raise(errc::divergent_parameter, "alpha(s) needs s > 2/3");
  const u64 N = cfg.N ? cfg.N : 1000000;
  const u64 P = cfg.P ? cfg.P : 100000;
  const RankCache rc = make_cache(cfg, p, std::max(N, P));
  const AlphaReport r = alpha_partial(rc, cfg.s, N, P, cfg.threads);
  Record rec = frame("alpha", p, N, {}, 0.0, r.direct, {}, kNaN, kNaN, P, {},
                     sw.ms());
  rec["s"] = r.s;
  rec["product"] = r.product;
  rec["abs_diff"] = std::fabs(r.direct - r.product);
  w.write(rec);
}

inline void cmd_psi(const RunConfig& cfg, const LucasParams& p,
                    RecordWriter& w, const Stopwatch& sw) {
  const u64 x = cfg.x ? cfg.x : 1000;
  u64 y;
  if (cfg.y >= 1.0) {
    y = static_cast<u64>(cfg.y);
  } else {
    y = 1;
    while ((y + 1) * (y + 1) <= x) ++y;  // floor(sqrt(x))
  }
  const SmoothSieve ss = SmoothSieve::build(x);
  const u64 count = psi(ss, x, y);
  Record rec = frame("psi", p, x, {}, 0.0, static_cast<double>(count), {},
                     kNaN, kNaN, 0, static_cast<double>(y), sw.ms());
  rec["count"] = count;
  w.write(rec);
}

// ---------------------------------------------------------------------------
// verify: pits every fast path against its slow reference and prints one
// PASS/FAIL line per check.

struct VerifyResult {
  bool all_pass = true;

  void line(std::ostream& out, bool pass, const std::string& name,
            const std::string& detail) {
    out << (pass ? "PASS  " : "FAIL  ") << std::left << std::setw(26) << name
        << detail << "\n";
    if (!pass) all_pass = false;
  }
};

inline std::vector<u64> divisors_of(const Factorization& f) {
  std::vector<u64> ds{1};
  for (const auto& [q, e] : f.factors) {
    const std::size_t base = ds.size();
    u64 qp = 1;
    for (u32 i = 1; i <= e; ++i) {
      qp *= q;
      for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * qp);
    }
  }
  return ds;
}

inline bool cmd_verify(const RunConfig& cfg, const LucasParams& p,
                       std::ostream& out, std::ostream& diag) {
  const u64 limit = cfg.limit ? cfg.limit : 2000;
  if (limit < 2) throw std::invalid_argument("verify: --limit must be >= 2");
  VerifyResult vr;
  out << "verify: a1 = " << p.a1 << ", a2 = " << p.a2 << ", limit = " << limit
      << "\n";

  const u64 cache_limit = std::max<u64>(limit, 10000);
  const RankCache rc(p, cache_limit, cfg.threads);
  (void)diag;

  {  // rank of every coprime m vs the scan oracle
    u64 checked = 0, bad = 0;
    for (u64 m = 1; m <= limit; ++m) {
      if (!coprime_to_a2(p, m)) continue;
      ++checked;
      const u64 want = oracle::z_scan(p, m).z;
      if (rc.z_of(m) != want) ++bad;
      if (m % 37 == 0 && z(p, m).z != want) ++bad;
    }
    vr.line(out, bad == 0, "rank-vs-scan",
            std::to_string(checked) + " coprime m <= " + std::to_string(limit) +
                (bad ? ", " + std::to_string(bad) + " mismatches" : ""));
  }

  {  // prime-power lifting vs the scan oracle
    const u64 bound = std::min<u64>(limit, 4096);
    u64 checked = 0, bad = 0;
    for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) {
      if (!coprime_to_a2(p, q)) continue;
      for (u64 qk = q * q; qk <= bound; qk *= q) {
        u32 k = 0;
        for (u64 t = qk; t > 1; t /= q) ++k;
        ++checked;
        if (z_prime_power(p, q, k).z != oracle::z_scan(p, qk).z) ++bad;
        if (qk > bound / q) break;
      }
    }
    vr.line(out, bad == 0, "power-rank-vs-scan",
            std::to_string(checked) + " prime powers <= " + std::to_string(bound));
  }

  {  // fast modular pair vs exact integers
    const u64 nmax = std::min<u64>(limit, 1000);
    const u64 moduli[] = {1,    2,          3,          7,
                          10,   97,         1000,       12345,
                          1000000007ull,    2147483647ull};
    u64 bad = 0;
    mpz_class up(0), uc(1), vp(2), vc(static_cast<long>(p.a1));
    for (u64 n = 1; n <= nmax; ++n) {
      for (u64 m : moduli) {
        const LucasPairMod got = uv_mod(p, n, m);
        mpz_class mm(static_cast<unsigned long>(m)), r;
        mpz_mod(r.get_mpz_t(), uc.get_mpz_t(), mm.get_mpz_t());
        if (r != static_cast<unsigned long>(got.u)) ++bad;
        mpz_mod(r.get_mpz_t(), vc.get_mpz_t(), mm.get_mpz_t());
        if (r != static_cast<unsigned long>(got.v)) ++bad;
      }
      mpz_class un = static_cast<long>(p.a1) * uc + static_cast<long>(p.a2) * up;
      up = uc;
      uc = un;
      mpz_class vn = static_cast<long>(p.a1) * vc + static_cast<long>(p.a2) * vp;
      vp = vc;
      vc = vn;
    }
    vr.line(out, bad == 0, "modular-vs-exact",
            std::to_string(nmax) + " indices x 10 moduli");
  }

  {  // companion identity, exact integers
    u64 bad = 0;
    const mpz_class na2(static_cast<long>(-p.a2));
    mpz_class u0(0), u1(1), v0(2), v1(static_cast<long>(p.a1)), pw(1);
    for (u64 n = 0; n <= 200; ++n) {  // (u0, v0) = (u_n, v_n), pw = (-a2)^n
      const mpz_class lhs = v0 * v0 - static_cast<long>(p.delta) * u0 * u0;
      if (lhs != 4 * pw) ++bad;
      mpz_class u2 = static_cast<long>(p.a1) * u1 + static_cast<long>(p.a2) * u0;
      mpz_class v2 = static_cast<long>(p.a1) * v1 + static_cast<long>(p.a2) * v0;
      u0 = std::move(u1);
      u1 = std::move(u2);
      v0 = std::move(v1);
      v1 = std::move(v2);
      pw *= na2;
    }
    vr.line(out, bad == 0, "companion-identity", "exact, n <= 200");
  }

  const u64 smooth_limit = std::min<u64>(std::max<u64>(limit, 300), 10000);
  const SmoothSieve ss = SmoothSieve::build(smooth_limit);

  {  // sieved gpf vs trial division
    u64 bad = 0;
    for (u64 n = 1; n <= smooth_limit; ++n)
      if (ss.gpf[n] != oracle::gpf_brute(n)) ++bad;
    vr.line(out, bad == 0, "gpf-vs-trial",
            "n <= " + std::to_string(smooth_limit));
  }

  {  // psi vs brute-force psi on a small grid
    const u64 xmax = std::min<u64>(smooth_limit, 300);
    u64 checked = 0, bad = 0;
    for (u64 x = 1; x <= xmax; ++x) {
      const u64 ys[] = {1, 2, 3, 5, x / 2 + 1, x};
      for (u64 y : ys) {
        if (y < 1 || y > x) continue;
        ++checked;
        if (psi(ss, x, y) != oracle::psi_brute(x, y)) ++bad;
      }
    }
    if (smooth_limit >= 30 && psi(ss, 30, 5) != 18) ++bad;
    vr.line(out, bad == 0, "psi-vs-brute",
            std::to_string(checked) + " (x, y) pairs, x <= " + std::to_string(xmax));
  }

  {  // float reduction vs exact rationals
    const u64 X = std::min<u64>(cache_limit, kExactTermCap);
    const SumReport r = tail_inv_ell(rc, 0, X, 0.0, true, cfg.threads);
    const double exact = r.exact->get_d();
    const double rel = std::fabs(r.value - exact) / exact;
    vr.line(out, rel <= 1e-12, "float-vs-rational",
            "sum 1/ell, m <= " + std::to_string(X) + ", rel err " +
                std::to_string(rel));
  }

  {  // divisor sums of the Jordan totient telescope to n^k
    const u64 nmax = std::min<u64>(limit, 2000);
    u64 bad = 0;
    for (u64 n = 1; n <= nmax; ++n) {
      const Factorization f = factorize(n, rc.spf());
      const auto ds = divisors_of(f);
      for (u32 k = 1; k <= 4; ++k) {
        u64 total = 0;
        for (u64 d : ds) total += jordan_totient(k, factorize(d, rc.spf()));
        if (total != checked_pow(n, k)) ++bad;
      }
    }
    vr.line(out, bad == 0, "jordan-divisor-sum",
            "n <= " + std::to_string(nmax) + ", k <= 4");
  }

  {  // moment of g^k vs the divisor-sum identity
    const u64 x = std::min<u64>(limit, 500);
    u64 bad = 0;
    for (u64 k = 1; k <= 2; ++k) {
      const SumReport direct = moment_gk(p, x, k, cfg.threads);
      const mpz_class chain = moment_via_jordan(rc, x, k);
      if (mpq_class(chain) != *direct.exact) ++bad;
    }
    vr.line(out, bad == 0, "moment-vs-divisor-chain",
            "x = " + std::to_string(x) + ", k in {1, 2}");
  }

  out << (vr.all_pass ? "verify: all checks passed\n"
                      : "verify: FAILURES present\n");
  return vr.all_pass;
}

}  // namespace cli_detail

// Exit codes: 0 success, 1 computation error (typed message on the
// diagnostic stream), 2 usage error.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  try {
    const LucasParams p = validate_params(cfg.a1, cfg.a2);
    const cli_detail::Stopwatch sw(cfg.timing);
    RecordWriter writer(out, cfg.format);
    if (cfg.command == "rank") {
      cli_detail::cmd_rank(cfg, p, writer, sw);
    } else if (cfg.command == "sieve") {
      cli_detail::cmd_sieve(cfg, p, writer, diag, sw);
    } else if (cfg.command == "qgamma") {
      cli_detail::cmd_qgamma(cfg, p, writer, sw);
    } else if (cfg.command == "moments") {
      cli_detail::cmd_moments(cfg, p, writer, sw);
    } else if (cfg.command == "logmoments") {
      cli_detail::cmd_logmoments(cfg, p, writer, sw);
    } else if (cfg.command == "dist") {
      cli_detail::cmd_dist(cfg, p, writer, sw);
    } else if (cfg.command == "tails-ell") {
      cli_detail::cmd_tails(cfg, p, /*mult=*/false, writer, sw);
    } else if (cfg.command == "tails-L") {
      cli_detail::cmd_tails(cfg, p, /*mult=*/true, writer, sw);
    } else if (cfg.command == "partition") {
      cli_detail::cmd_partition(cfg, p, writer, sw);
    } else if (cfg.command == "ratio-density") {
      cli_detail::cmd_ratio_density(cfg, p, writer, sw);
    } else if (cfg.command == "alpha") {
      cli_detail::cmd_alpha(cfg, p, writer, sw);
    } else if (cfg.command == "psi") {
      cli_detail::cmd_psi(cfg, p, writer, sw);
    } else if (cfg.command == "verify") {
      return cli_detail::cmd_verify(cfg, p, out, diag) ? 0 : 1;
    } else {
      throw std::invalid_argument("unknown command '" + cfg.command + "'");
    }
    return 0;
  } catch (const error& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    diag << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lucas
