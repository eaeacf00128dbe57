#pragma once

#include <mpfr.h>

#include "balfib/errors.hpp"

namespace balfib::numerics {

// Escalation schedule for adaptive-precision computations. working_bits is
// where a computation starts; each escalation multiplies by escalation_factor
// until max_bits, after which the computation must give up with
// PrecisionExhausted instead of returning an uncertified result.
struct PrecisionContext {
  mpfr_prec_t working_bits = 192;
  mpfr_prec_t max_bits = 1u << 20;
  int escalation_factor = 2;

  PrecisionContext() = default;
  PrecisionContext(mpfr_prec_t working, mpfr_prec_t max, int factor = 2)
      : working_bits(working), max_bits(max), escalation_factor(factor) {
    validate();
  }

  void validate() const {
    if (working_bits < 64) throw ConfigError("working_bits must be >= 64");
    if (working_bits > max_bits)
      throw ConfigError("working_bits must be <= max_bits");
    if (escalation_factor < 2)
      throw ConfigError("escalation_factor must be >= 2");
  }

  [[nodiscard]] mpfr_prec_t next(mpfr_prec_t bits) const {
    if (bits >= max_bits)
      throw PrecisionExhausted("precision ladder exhausted at " +
                               std::to_string(bits) + " bits");
    mpfr_prec_t up = bits * escalation_factor;
    return up > max_bits ? max_bits : up;
  }

  [[nodiscard]] mpfr_prec_t clamp(mpfr_prec_t bits) const {
    if (bits < working_bits) return working_bits;
    return bits > max_bits ? max_bits : bits;
  }
};

}  // namespace balfib::numerics
