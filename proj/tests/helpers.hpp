#pragma once

#include <stdexcept>
#include <vector>

#include "lucas/error.hpp"
#include "lucas/params.hpp"

// The recurring cast of coefficient pairs: Fibonacci, Pell, and three
// less-famous sequences with discriminants of varied shape.
inline const std::vector<lucas::LucasParams>& test_sequences() {
  static const std::vector<lucas::LucasParams> v = {
      lucas::validate_params(1, 1),   // Fibonacci, delta 5
      lucas::validate_params(2, 1),   // Pell, delta 8
      lucas::validate_params(1, 2),   // delta 9
      lucas::validate_params(3, -1),  // delta 5
      lucas::validate_params(5, 7),   // delta 53
  };
  return v;
}

template <class Fn>
lucas::errc error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const lucas::error& e) {
    return e.code();
  }
  throw std::logic_error("expected a lucas::error");
}
