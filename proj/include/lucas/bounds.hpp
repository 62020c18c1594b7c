#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lucas/error.hpp"
#include "lucas/modmath.hpp"

// Closed-form reference curves that the experiment sums are compared
// against. All are asymptotic shapes evaluated literally: unspecified o(1)
// terms are taken as 0 and slack constants epsilon are caller-supplied, so
// ratios against these curves show trends, not proofs. Logs are natural.
namespace lucas {

// sqrt(log x * log log x); callers gate x >= 16 so both logs are positive.
inline double sqrt_log_loglog(double x) {
  const double lx = std::log(x);
  return std::sqrt(lx * std::log(lx));
}

namespace detail {
inline void require_range(bool ok, const std::string& what) {
  if (!ok) raise(errc::out_of_validity_range, what);
}
}  // namespace detail

// Moment sum of g^k up to x: x^{k+1} * exp(-sqrt(log x log log x)).
inline double moment_bound(double x, u64 k) {
  detail::require_range(x >= 16.0, "moment_bound needs x >= 16");
  return std::pow(x, static_cast<double>(k) + 1.0) * std::exp(-sqrt_log_loglog(x));
}

// Tail of sum 1/ell past x: exp(-(1/sqrt(6) - eps) * sqrt(log x log log x)).
inline double ell_tail_bound(double x, double eps) {
  detail::require_range(x >= 16.0, "ell_tail_bound needs x >= 16");
  return std::exp(-(1.0 / std::sqrt(6.0) - eps) * sqrt_log_loglog(x));
}

// Count of n <= x with g(n) > y: x^2 / (y * exp(sqrt(log x log log x))).
inline double dist_count_bound(double x, double y) {
  detail::require_range(x >= 16.0, "dist_count_bound needs x >= 16");
  detail::require_range(y >= 1.0, "dist_count_bound needs y >= 1");
  return x * x / (y * std::exp(sqrt_log_loglog(x)));
}

// Smallest y where dist_count_bound is the sharper tool:
// x * exp(-(1/2) * sqrt(log x log log x)); the range tops out at y = x.
inline double dist_crossover_min_y(double x) {
  detail::require_range(x >= 16.0, "dist_crossover_min_y needs x >= 16");
  return x * std::exp(-0.5 * sqrt_log_loglog(x));
}

// Tail of sum 1/L past x: x^{-1/3 + eps}.
inline double L_tail_bound(double x, double eps) {
  detail::require_range(x >= 1.0, "L_tail_bound needs x >= 1");
  return std::pow(x, -1.0 / 3.0 + eps);
}

// Tail of sum 1/L over n with gpf(n) > y: y^{-(1/3 - eps)}, eps in (0, 1/4].
inline double rough_tail_bound(double y, double eps) {
  detail::require_range(y >= 2.0, "rough_tail_bound needs y >= 2");
  detail::require_range(eps > 0.0 && eps <= 0.25,
                        "rough_tail_bound needs eps in (0, 1/4]");
  return std::pow(y, -(1.0 / 3.0 - eps));
}

// Tail of sum 1/L over y-smooth n past some x, via smooth-count partial
// summation: (log y) e^{-sqrt(y)/(2 log y)} + (log y / log v) e^{-v log v}
// with v = log x / log y. Needs y > (log x)^2 and v > 1.
inline double smooth_tail_bound(double x, double y) {
  detail::require_range(x > 1.0, "smooth_tail_bound needs x > 1");
  detail::require_range(y >= 2.0, "smooth_tail_bound needs y >= 2");
  const double lx = std::log(x);
  const double ly = std::log(y);
  detail::require_range(y > lx * lx, "smooth_tail_bound needs y > (log x)^2");
  const double v = lx / ly;
  detail::require_range(v > 1.0, "smooth_tail_bound needs x > y");
  return ly * std::exp(-std::sqrt(y) / (2.0 * ly)) +
         ly / std::log(v) * std::exp(-v * std::log(v));
}

// psi(t, y) <= t * exp(-log t / (2 log y)), uniform in t >= y >= 2.
inline double psi_bound_uniform(double t, double y) {
  detail::require_range(t >= y && y >= 2.0, "psi_bound_uniform needs t >= y >= 2");
  return t * std::exp(-std::log(t) / (2.0 * std::log(y)));
}

// psi(t, y) <= t * exp(-v log v) with v = log t / log y, for t >= y >= 2.
inline double psi_bound_v_log_v(double t, double y) {
  detail::require_range(t >= y && y >= 2.0, "psi_bound_v_log_v needs t >= y >= 2");
  const double v = std::log(t) / std::log(y);
  return t * std::exp(-v * std::log(v));
}

// String-keyed dispatch for tools and tests.
struct BoundArgs {
  std::optional<double> x, y, t, eps;
  std::optional<u64> k;
};

inline double eval_bound(std::string_view id, const BoundArgs& a) {
  const auto need = [&](const std::optional<double>& o, const char* name) {
    if (!o)
      throw std::invalid_argument(std::string("eval_bound: missing argument ") + name);
    return *o;
  };
  if (id == "moment") {
    if (!a.k) throw std::invalid_argument("eval_bound: missing argument k");
    return moment_bound(need(a.x, "x"), *a.k);
  }
  if (id == "ell-tail") return ell_tail_bound(need(a.x, "x"), a.eps.value_or(0.0));
  if (id == "dist") return dist_count_bound(need(a.x, "x"), need(a.y, "y"));
  if (id == "dist-crossover") return dist_crossover_min_y(need(a.x, "x"));
  if (id == "L-tail") return L_tail_bound(need(a.x, "x"), a.eps.value_or(0.0));
  if (id == "rough-tail") return rough_tail_bound(need(a.y, "y"), need(a.eps, "eps"));
  if (id == "smooth-tail") return smooth_tail_bound(need(a.x, "x"), need(a.y, "y"));
  if (id == "psi-uniform") return psi_bound_uniform(need(a.t, "t"), need(a.y, "y"));
  if (id == "psi-vlogv") return psi_bound_v_log_v(need(a.t, "t"), need(a.y, "y"));
  throw std::invalid_argument("eval_bound: unknown bound id '" + std::string(id) + "'");
}

}  // namespace lucas
