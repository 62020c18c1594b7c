#pragma once

#include <numeric>

#include "lucas/error.hpp"
#include "lucas/modmath.hpp"

namespace lucas {

// Coefficients of the recurrence u_n = a1*u_{n-1} + a2*u_{n-2} with
// u_0 = 0, u_1 = 1, plus the discriminant of X^2 - a1*X - a2.
// Instances come from validate_params, which rejects the degenerate
// integer cases: those are exactly the pairs whose characteristic root
// ratio is a root of unity, and rank-of-appearance is undefined for them.
struct LucasParams {
  i64 a1;
  i64 a2;
  i64 delta;  // a1^2 + 4*a2
};

inline LucasParams validate_params(i64 a1, i64 a2) {
  if (a2 == 0) raise(errc::zero_coefficient, "a2 must be nonzero");
  const i128 d = static_cast<i128>(a1) * a1 + 4 * static_cast<i128>(a2);
  if (d == 0)
    raise(errc::zero_discriminant, "a1^2 + 4*a2 = 0");
  if (a1 == 0 || ((a1 == 1 || a1 == -1) && a2 == -1))
    raise(errc::degenerate, "characteristic root ratio is a root of unity");
  if (d > std::numeric_limits<i64>::max() || d < std::numeric_limits<i64>::min())
    raise(errc::overflow, "discriminant exceeds 64 bits");
  return LucasParams{a1, a2, static_cast<i64>(d)};
}

inline bool coprime_to_a2(const LucasParams& p, u64 m) {
  return std::gcd(m, abs_u64(p.a2)) == 1;
}

}  // namespace lucas
