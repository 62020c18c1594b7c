// Quick tour: the rank-of-appearance landscape of one sequence. Prints
// g, z, ell and L for small m, then one tail of sum 1/ell against its
// reference curve. Pass a1 and a2 on the command line (default 1 1).
#include <cstdio>
#include <cstdlib>

#include "lucas/arith.hpp"
#include "lucas/rank.hpp"
#include "lucas/sums.hpp"

using namespace lucas;

int main(int argc, char** argv) {
  const i64 a1 = argc > 1 ? std::atoll(argv[1]) : 1;
  const i64 a2 = argc > 2 ? std::atoll(argv[2]) : 1;
  LucasParams p{1, 1, 5};
  try {
    p = validate_params(a1, a2);
  } catch (const error& e) {
    std::fprintf(stderr, "bad coefficients: %s\n", e.what());
    return 1;
  }
  std::printf("u(n) = %lld u(n-1) + %lld u(n-2), discriminant %lld\n\n",
              static_cast<long long>(p.a1), static_cast<long long>(p.a2),
              static_cast<long long>(p.delta));

  const RankCache rc(p, 100000);
  std::printf("%4s %8s %8s %8s %8s\n", "m", "g(m)", "z(m)", "ell(m)", "L(m)");
  for (u64 m = 1; m <= 30; ++m) {
    const unsigned long long g = gcd_un(p, m);
    const unsigned long long L = rc.L_of(m);
    if (coprime_to_a2(p, m)) {
      std::printf("%4llu %8llu %8llu %8llu %8llu\n",
                  static_cast<unsigned long long>(m), g,
                  static_cast<unsigned long long>(rc.z_of(m)),
                  static_cast<unsigned long long>(rc.ell_of(m)), L);
    } else {
      // z and ell need m coprime to a2; L is defined everywhere
      std::printf("%4llu %8llu %8s %8s %8llu\n",
                  static_cast<unsigned long long>(m), g, "-", "-", L);
    }
  }

  const SumReport tail = tail_inv_ell(rc, 100, 100000);
  std::printf("\nsum of 1/ell over (100, 100000]: %.9f\n", tail.value);
  std::printf("reference curve at x = 100:      %.9f  (ratio %.4f)\n",
              tail.bound, tail.ratio);
  return 0;
}
