#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "lucas/bounds.hpp"
#include "lucas/sums.hpp"

using namespace lucas;

TEST_CASE("reference curves reject out-of-range inputs") {
  CHECK(error_code_of([] { moment_bound(10.0, 1); }) ==
        errc::out_of_validity_range);
  CHECK(error_code_of([] { ell_tail_bound(15.9, 0.0); }) ==
        errc::out_of_validity_range);
  CHECK(error_code_of([] { dist_count_bound(100.0, 0.5); }) ==
        errc::out_of_validity_range);
  CHECK(error_code_of([] { L_tail_bound(0.5, 0.0); }) ==
        errc::out_of_validity_range);
  CHECK(error_code_of([] { rough_tail_bound(100.0, 0.3); }) ==
        errc::out_of_validity_range);
  CHECK(error_code_of([] { rough_tail_bound(100.0, 0.0); }) ==
        errc::out_of_validity_range);
  CHECK(error_code_of([] { smooth_tail_bound(1e6, 100.0); }) ==
        errc::out_of_validity_range);  // y <= (log x)^2
  CHECK(error_code_of([] { psi_bound_uniform(10.0, 20.0); }) ==
        errc::out_of_validity_range);
}

TEST_CASE("reference curves evaluate to their closed forms") {
  const double x = 1e5;
  const double s = sqrt_log_loglog(x);
  CHECK(s == Catch::Approx(std::sqrt(std::log(x) * std::log(std::log(x)))));
  CHECK(moment_bound(x, 1) == Catch::Approx(x * x * std::exp(-s)));
  CHECK(moment_bound(x, 3) == Catch::Approx(std::pow(x, 4.0) * std::exp(-s)));
  CHECK(ell_tail_bound(x, 0.01) ==
        Catch::Approx(std::exp(-(1.0 / std::sqrt(6.0) - 0.01) * s)));
  CHECK(dist_count_bound(x, 50.0) ==
        Catch::Approx(x * x / (50.0 * std::exp(s))));
  CHECK(dist_crossover_min_y(x) == Catch::Approx(x * std::exp(-0.5 * s)));
  CHECK(L_tail_bound(x, 0.05) == Catch::Approx(std::pow(x, -1.0 / 3.0 + 0.05)));
  CHECK(rough_tail_bound(100.0, 0.25) ==
        Catch::Approx(std::pow(100.0, -(1.0 / 3.0 - 0.25))));
  CHECK(psi_bound_v_log_v(100.0, 100.0) == Catch::Approx(100.0));  // v = 1
  CHECK(psi_bound_uniform(1e4, 100.0) ==
        Catch::Approx(1e4 * std::exp(-std::log(1e4) / (2.0 * std::log(100.0)))));
}

TEST_CASE("bound dispatch by id") {
  BoundArgs a;
  a.x = 1e5;
  a.y = 50.0;
  a.t = 1e4;
  a.eps = 0.1;
  a.k = 2;
  CHECK(eval_bound("moment", a) == Catch::Approx(moment_bound(1e5, 2)));
  CHECK(eval_bound("ell-tail", a) == Catch::Approx(ell_tail_bound(1e5, 0.1)));
  CHECK(eval_bound("dist", a) == Catch::Approx(dist_count_bound(1e5, 50.0)));
  CHECK(eval_bound("dist-crossover", a) == Catch::Approx(dist_crossover_min_y(1e5)));
  CHECK(eval_bound("L-tail", a) == Catch::Approx(L_tail_bound(1e5, 0.1)));
  CHECK(eval_bound("rough-tail", a) == Catch::Approx(rough_tail_bound(50.0, 0.1)));
  CHECK(eval_bound("psi-uniform", a) == Catch::Approx(psi_bound_uniform(1e4, 50.0)));
  CHECK(eval_bound("psi-vlogv", a) == Catch::Approx(psi_bound_v_log_v(1e4, 50.0)));
  a.y = 200.0;
  CHECK(eval_bound("smooth-tail", a) == Catch::Approx(smooth_tail_bound(1e5, 200.0)));
  REQUIRE_THROWS_AS(eval_bound("nope", a), std::invalid_argument);
  REQUIRE_THROWS_AS(eval_bound("moment", BoundArgs{}), std::invalid_argument);
}

TEST_CASE("moments of g are exact") {
  const auto fib = validate_params(1, 1);
  const SumReport m1 = moment_gk(fib, 10, 1);
  REQUIRE(m1.exact.has_value());
  CHECK(*m1.exact == mpq_class(19));
  CHECK(m1.value == 19.0);
  const SumReport m2 = moment_gk(fib, 10, 2);
  CHECK(*m2.exact == mpq_class(61));
  REQUIRE_THROWS_AS(moment_gk(fib, 0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(moment_gk(fib, 10, 0), std::invalid_argument);
}

TEST_CASE("moments match the divisor-sum identity") {
  for (const auto& p : test_sequences()) {
    const RankCache rc(p, 400);
    for (u64 k = 1; k <= 2; ++k) {
      for (u64 x : {1, 2, 15, 16, 99, 100, 399, 400}) {
        const SumReport direct = moment_gk(p, x, k);
        const mpz_class via = moment_via_jordan(rc, x, k);
        REQUIRE(mpq_class(via) == *direct.exact);
      }
    }
  }
}

TEST_CASE("tail of 1/ell has the known exact prefix") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 2000);
  const SumReport r = tail_inv_ell(rc, 0, 10, 0.0, true);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == mpq_class(2189, 1260));
  CHECK(r.value == Catch::Approx(mpq_class(2189, 1260).get_d()).epsilon(1e-14));
  // below the curve's validity range no bound is attached
  CHECK(std::isnan(r.bound));

  const SumReport tail = tail_inv_ell(rc, 16, 2000, 0.0, true);
  CHECK(std::isfinite(tail.bound));
  const double exact_d = tail.exact->get_d();
  CHECK(std::fabs(tail.value - exact_d) / exact_d < 1e-12);
}

TEST_CASE("tail of 1/L has the known exact prefix") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 2000);
  const SumReport r = tail_inv_L(rc, 0, 10, 0.0, true);
  CHECK(*r.exact == mpq_class(467, 280));
  CHECK(std::isnan(r.bound));  // curve needs x >= 1
  const SumReport from_one = tail_inv_L(rc, 1, 10, 0.0, true);
  CHECK(std::isfinite(from_one.bound));
  CHECK(*from_one.exact == mpq_class(187, 280));  // drops the n = 1 term
  const SumReport t = tail_inv_L(rc, 100, 2000, 0.0, true);
  const double exact_d = t.exact->get_d();
  CHECK(std::fabs(t.value - exact_d) / exact_d < 1e-12);
}

TEST_CASE("tail sums enforce their preconditions") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 2000);
  CHECK(error_code_of([&] { tail_inv_ell(rc, 10, 10); }) ==
        errc::horizon_too_small);
  CHECK(error_code_of([&] { tail_inv_ell(rc, 10, 3000); }) ==
        errc::rank_unavailable);
  CHECK(error_code_of([&] { tail_inv_L(rc, 10, 5); }) ==
        errc::horizon_too_small);
  // exact mode is capped
  const RankCache big(fib, 12000);
  CHECK(error_code_of([&] { tail_inv_ell(big, 0, 11000, 0.0, true); }) ==
        errc::out_of_validity_range);
}

TEST_CASE("tails only count coprime terms for ell") {
  const auto even = validate_params(1, 2);  // a2 = 2: even m excluded
  const RankCache rc(even, 100);
  const SumReport r = tail_inv_ell(rc, 0, 4, 0.0, true);
  // m = 1, 3: ell(1) = 1, z(3) = 3 so ell(3) = 3 -> 1 + 1/3
  CHECK(*r.exact == mpq_class(4, 3));
  // 1/L runs over every n
  const SumReport l = tail_inv_L(rc, 0, 2, 0.0, true);
  // L(1) = 1, L(2) = 2 (2 | a2)
  CHECK(*l.exact == mpq_class(3, 2));
}

TEST_CASE("log moments accumulate decade means") {
  const auto fib = validate_params(1, 1);
  const LogMomentReport r = log_moment(fib, 10, 1);
  // g-values 1..10: two 5s and one 2 contribute
  const double expect = 2.0 * std::log(5.0) + std::log(2.0);
  CHECK(r.sum.value == Catch::Approx(expect).epsilon(1e-14));
  REQUIRE(r.decade_mean.size() == 1);
  CHECK(r.decade_mean[0].first == 10);
  CHECK(r.decade_mean[0].second == Catch::Approx(expect / 10.0));

  const LogMomentReport r2 = log_moment(fib, 250, 2);
  REQUIRE(r2.decade_mean.size() == 3);
  CHECK(r2.decade_mean[0].first == 10);
  CHECK(r2.decade_mean[1].first == 100);
  CHECK(r2.decade_mean[2].first == 250);
  // lambda = 2 on the same prefix: 2 log^2 5 + log^2 2
  const double e2 = 2.0 * std::log(5.0) * std::log(5.0) +
                    std::log(2.0) * std::log(2.0);
  CHECK(r2.decade_mean[0].second * 10.0 == Catch::Approx(e2).epsilon(1e-14));
}

TEST_CASE("distribution counts of large g") {
  const auto fib = validate_params(1, 1);
  const DistReport r = dist_count(fib, 15, 3);
  CHECK(r.count == 4);  // n = 5, 10, 12, 15
  CHECK(std::isnan(r.bound));  // x < 16

  const DistReport b = dist_count(fib, 1000, 10);
  u64 expect = 0;
  for (u64 n = 1; n <= 1000; ++n) expect += gcd_un(fib, n) > 10 ? 1 : 0;
  CHECK(b.count == expect);
  CHECK(std::isfinite(b.bound));
  CHECK(b.y_range_lo == Catch::Approx(dist_crossover_min_y(1000.0)));
  CHECK(b.y_range_hi == 1000.0);

  REQUIRE_THROWS_AS(dist_count(fib, 0, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(dist_count(fib, 10, 0), std::invalid_argument);
}

TEST_CASE("partition covers every n exactly once") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 10000);
  const SmoothSieve ss = SmoothSieve::build(10000);
  const PartitionReport r = partition_classes(rc, ss, 10000, 1, 20.0);
  u64 total = 0;
  for (u64 c : r.counts) total += c;
  CHECK(total == 10000);
  mpz_class mass(0);
  for (const auto& m : r.masses) mass += m;
  const SumReport moment = moment_gk(fib, 10000, 1);
  CHECK(mpq_class(mass) == *moment.exact);
  CHECK(r.y == 20.0);

  // independent reclassification for a small prefix
  const long double y = 20.0L, y6 = std::pow(y, 6.0L);
  for (u64 n = 1; n <= 2000; ++n) {
    const u64 gp = oracle::gpf_brute(n);
    int expect;
    if (gp > 1 && uv_mod(fib, n, gp).u != 0) {
      expect = 0;
    } else if (static_cast<long double>(gp) <= y) {
      expect = 1;
    } else if (static_cast<long double>(gp) > y6) {
      const u64 zp = oracle::z_scan(fib, gp).z;
      expect = static_cast<long double>(zp) <=
                       std::pow(static_cast<long double>(gp), 1.0L / 3.0L)
                   ? 2
                   : 3;
    } else {
      expect = 4;
    }
    const PartitionReport one = partition_classes(rc, ss, n, 1, 20.0);
    if (n > 1) {
      const PartitionReport prev = partition_classes(rc, ss, n - 1, 1, 20.0);
      for (int c = 0; c < 5; ++c) {
        const u64 delta = one.counts[c] - prev.counts[c];
        REQUIRE(delta == (c == expect ? 1 : 0));
      }
    } else {
      REQUIRE(one.counts[expect] == 1);
    }
  }
}

TEST_CASE("partition validates its inputs") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 100);
  const SmoothSieve ss = SmoothSieve::build(100);
  CHECK(error_code_of([&] { partition_classes(rc, ss, 10, 1); }) ==
        errc::out_of_validity_range);  // default y needs x >= 16
  REQUIRE_THROWS_AS(partition_classes(rc, ss, 10, 1, 0.5),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(partition_classes(rc, ss, 0, 1, 2.0),
                    std::invalid_argument);
  CHECK_NOTHROW(partition_classes(rc, ss, 16, 1));
  CHECK(error_code_of([&] { partition_classes(rc, ss, 200, 1, 2.0); }) ==
        errc::rank_unavailable);
}

TEST_CASE("density of L exceeding C times ell") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 1000);
  const RatioDensityReport r = ratio_density(rc, 6, 1.0);
  CHECK(r.count == 1);  // only n = 6: L = 72 > ell = 12
  CHECK(r.proportion == Catch::Approx(1.0 / 6.0));

  const RatioDensityReport d = ratio_density(rc, 1000, 2.0);
  u64 expect = 0;
  for (u64 n = 1; n <= 1000; ++n) {
    if (ell_mult(fib, n) > 2 * ell(fib, n)) ++expect;
  }
  CHECK(d.count == expect);
  REQUIRE(d.decades.size() == 3);
  CHECK(d.decades[2].first == 1000);
  CHECK(d.decades[2].second == Catch::Approx(d.proportion));

  REQUIRE_THROWS_AS(ratio_density(rc, 100, 0.5), std::invalid_argument);
}

TEST_CASE("dirichlet series partial sums and euler products agree") {
  const auto fib = validate_params(1, 1);
  const RankCache rc(fib, 20000);
  const AlphaReport r = alpha_partial(rc, 2.0, 20000, 20000);
  CHECK(std::fabs(r.direct - r.product) < 1e-4);

  // local factors at s = 2: q = 2 gives 1 + 1/9, q = 5 gives 25/24,
  // q = 3 gives 1 + 1/32, q = 11 gives 1 + 1/1200
  const AlphaReport p2 = alpha_partial(rc, 2.0, 1, 2);
  CHECK(p2.product == Catch::Approx(10.0 / 9.0).epsilon(1e-12));
  const AlphaReport p3 = alpha_partial(rc, 2.0, 1, 3);
  CHECK(p3.product == Catch::Approx((10.0 / 9.0) * (33.0 / 32.0)).epsilon(1e-12));
  const AlphaReport p5 = alpha_partial(rc, 2.0, 1, 5);
  CHECK(p5.product ==
        Catch::Approx((10.0 / 9.0) * (33.0 / 32.0) * (25.0 / 24.0)).epsilon(1e-12));
  const AlphaReport p11 = alpha_partial(rc, 2.0, 1, 11);
  CHECK(p11.product == Catch::Approx((10.0 / 9.0) * (33.0 / 32.0) *
                                     (25.0 / 24.0) * (1.0 + 1.0 / (8.0 * 48.0)) *
                                     (1.0 + 1.0 / 1200.0))
                           .epsilon(1e-12));

  CHECK(error_code_of([&] { alpha_partial(rc, 0.5, 100, 100); }) ==
        errc::divergent_parameter);
  CHECK(error_code_of([&] { alpha_partial(rc, 2.0 / 3.0, 100, 100); }) ==
        errc::divergent_parameter);
  REQUIRE_THROWS_AS(alpha_partial(rc, 2.0, 0, 100), std::invalid_argument);
  REQUIRE_THROWS_AS(alpha_partial(rc, 2.0, 100, 1), std::invalid_argument);
  CHECK(error_code_of([&] { alpha_partial(rc, 2.0, 30000, 100); }) ==
        errc::rank_unavailable);
}

TEST_CASE("chunked reductions are independent of the worker count") {
  const auto fib = validate_params(1, 1);
  const auto term = [&](u64 n) {
    return 1.0 / static_cast<double>(gcd_un(fib, n) + n % 7);
  };
  const double s1 = chunked_sum(1, 200001, 1, term);
  const double s8 = chunked_sum(1, 200001, 8, term);
  REQUIRE(s1 == s8);  // bit-identical, not approximately equal

  const u64 c1 = chunked_count(1, 200001, 1, [](u64 n) { return n % 3 == 0; });
  const u64 c8 = chunked_count(1, 200001, 8, [](u64 n) { return n % 3 == 0; });
  REQUIRE(c1 == c8);
  CHECK(c1 == 66666);
}

TEST_CASE("chunked loops propagate worker exceptions") {
  REQUIRE_THROWS_AS(chunked_sum(1, 300000, 4,
                                [](u64 n) -> double {
                                  if (n == 250000) throw std::runtime_error("boom");
                                  return 0.0;
                                }),
                    std::runtime_error);
}
