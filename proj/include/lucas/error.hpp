#pragma once

#include <stdexcept>
#include <string>

namespace lucas {

// Typed failure categories. The CLI maps any lucas::error to exit code 1;
// plain std::invalid_argument (malformed arguments) maps to exit code 2.
enum class errc {
  zero_coefficient,
  zero_discriminant,
  degenerate,
  not_coprime,
  scan_exhausted,
  lift_failed,
  horizon_too_small,
  memory_budget_exceeded,
  divergent_parameter,
  out_of_validity_range,
  rank_unavailable,
  overflow,
  bad_table,
  io_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_coefficient:       return "ZeroCoefficient";
    case errc::zero_discriminant:      return "ZeroDiscriminant";
    case errc::degenerate:             return "Degenerate";
    case errc::not_coprime:            return "NotCoprime";
    case errc::scan_exhausted:         return "ScanExhausted";
    case errc::lift_failed:            return "LiftFailed";
    case errc::horizon_too_small:      return "HorizonTooSmall";
    case errc::memory_budget_exceeded: return "MemoryBudgetExceeded";
    case errc::divergent_parameter:    return "DivergentParameter";
    case errc::out_of_validity_range:  return "OutOfValidityRange";
    case errc::rank_unavailable:       return "RankUnavailable";
    case errc::overflow:               return "Overflow";
    case errc::bad_table:              return "BadTable";
    case errc::io_failure:             return "IoFailure";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace lucas
