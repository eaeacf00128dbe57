#pragma once

#include "balfib/approx_real.hpp"
#include "balfib/precision.hpp"
#include "balfib/refinable.hpp"

namespace balfib::numerics {

inline ApproxReal sqrt2(mpfr_prec_t bits) {
  return sqrt_of(ApproxReal::exact_int(2, bits));
}

// gamma = 3 + 2*sqrt(2) and delta = 3 - 2*sqrt(2), the roots of x^2 - 6x + 1.
inline ApproxReal gamma_const(mpfr_prec_t bits) {
  return add_int(mul_2exp(sqrt2(bits), 1), mpz_class(3));
}

inline ApproxReal delta_const(mpfr_prec_t bits) {
  return add_int(neg(mul_2exp(sqrt2(bits), 1)), mpz_class(3));
}

inline ApproxReal log2_const(mpfr_prec_t bits) {
  return log_of(ApproxReal::exact_int(2, bits));
}

inline ApproxReal log_gamma_const(mpfr_prec_t bits) {
  return log_of(gamma_const(bits));
}

struct AlgebraicConstants {
  ApproxReal gamma;
  ApproxReal delta;
  ApproxReal log_gamma;
  ApproxReal log2;
};

inline AlgebraicConstants make_algebraic_constants(
    const PrecisionContext& ctx) {
  mpfr_prec_t b = ctx.working_bits;
  return AlgebraicConstants{gamma_const(b), delta_const(b),
                            log_gamma_const(b), log2_const(b)};
}

inline RefinableReal ref_sqrt2() {
  return RefinableReal([](mpfr_prec_t b) { return sqrt2(b); }, "sqrt2");
}

inline RefinableReal ref_log2_over_log_gamma() {
  return RefinableReal(
      [](mpfr_prec_t b) { return div(log2_const(b), log_gamma_const(b)); },
      "log2/log_gamma");
}

inline RefinableReal ref_log_gamma_over_log2() {
  return RefinableReal(
      [](mpfr_prec_t b) { return div(log_gamma_const(b), log2_const(b)); },
      "log_gamma/log2");
}

}  // namespace balfib::numerics
