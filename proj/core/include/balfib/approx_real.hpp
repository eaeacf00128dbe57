#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>
#include <utility>

#include "balfib/errors.hpp"

namespace balfib::numerics {

// Certified enclosure of a real number. Internally stored as outward-rounded
// endpoints [lo, hi] at a fixed binary precision; the exact value is
// guaranteed to lie inside. midpoint()/err() expose the equivalent
// midpoint-radius view. All arithmetic rounds outward, so composing
// operations never loses the enclosure property.
class ApproxReal {
 public:
  ApproxReal();  // exact zero
  ApproxReal(const ApproxReal& o);
  ApproxReal(ApproxReal&& o) noexcept;
  ApproxReal& operator=(const ApproxReal& o);
  ApproxReal& operator=(ApproxReal&& o) noexcept;
  ~ApproxReal();

  static ApproxReal exact_int(long v, mpfr_prec_t prec = 64);
  static ApproxReal from_integer(const mpz_class& z, mpfr_prec_t prec);
  static ApproxReal from_rational(const mpq_class& q, mpfr_prec_t prec);
  // Parses a decimal literal ("5.1e31", "17.2") into an enclosure of its
  // exact rational value.
  static ApproxReal from_decimal(const std::string& s, mpfr_prec_t prec);
  // Takes ownership semantics by copy; endpoints must satisfy lo <= hi.
  static ApproxReal from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi,
                                   mpfr_prec_t prec);
  // Midpoint/err view, as read from the cache file.
  static ApproxReal from_midpoint_err(const std::string& mid_decimal,
                                      const std::string& err_decimal,
                                      mpfr_prec_t prec);

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  mpfr_prec_t prec() const { return prec_; }

  bool is_exact() const;       // lo == hi
  bool contains_zero() const;  // lo <= 0 <= hi
  bool is_certainly_positive() const;
  bool is_certainly_negative() const;

  bool contains(const mpz_class& z) const;
  bool contains(const mpq_class& q) const;

  // Every point of *this < z (resp. > z).
  bool certainly_less_than(const mpz_class& z) const;
  bool certainly_greater_than(const mpz_class& z) const;
  bool certainly_less_than(const mpq_class& q) const;
  bool certainly_greater_than(const mpq_class& q) const;
  bool certainly_leq(const mpz_class& z) const;
  bool certainly_geq(const mpz_class& z) const;

  // max(|lo|, |hi|) < 2^e, certified.
  bool abs_below_2exp(long e) const;
  // hi - lo < 2^e, certified.
  bool width_below_2exp(long e) const;

  // Unique floor of every point in the interval, when decidable.
  std::optional<mpz_class> certified_floor() const;
  std::optional<mpz_class> certified_ceil() const;
  mpz_class nearest_int_of_mid() const;

  double to_double() const;  // midpoint, best effort
  std::string midpoint_string(size_t digits) const;
  std::string err_string() const;  // upper bound on radius, short decimal

  // Re-rounds into `prec` bits, outward.
  ApproxReal rounded_to(mpfr_prec_t prec) const;
  // Widens both endpoints by 2^e.
  ApproxReal widened_by_2exp(long e) const;

 private:
  friend ApproxReal add(const ApproxReal&, const ApproxReal&);
  friend ApproxReal sub(const ApproxReal&, const ApproxReal&);
  friend ApproxReal mul(const ApproxReal&, const ApproxReal&);
  friend ApproxReal div(const ApproxReal&, const ApproxReal&);
  friend ApproxReal neg(const ApproxReal&);
  friend ApproxReal abs_val(const ApproxReal&);
  friend ApproxReal sqrt_of(const ApproxReal&);
  friend ApproxReal log_of(const ApproxReal&);
  friend ApproxReal exp_of(const ApproxReal&);
  friend ApproxReal pow_ui(const ApproxReal&, unsigned long);
  friend ApproxReal mul_2exp(const ApproxReal&, long);
  friend ApproxReal mul_int(const ApproxReal&, const mpz_class&);
  friend ApproxReal add_int(const ApproxReal&, const mpz_class&);

  struct RawTag {};
  ApproxReal(RawTag, mpfr_prec_t prec);
  static ApproxReal raw(mpfr_prec_t prec) { return {RawTag{}, prec}; }

  mpfr_t lo_;
  mpfr_t hi_;
  mpfr_prec_t prec_;
};

ApproxReal add(const ApproxReal& a, const ApproxReal& b);
ApproxReal sub(const ApproxReal& a, const ApproxReal& b);
ApproxReal mul(const ApproxReal& a, const ApproxReal& b);
ApproxReal div(const ApproxReal& a, const ApproxReal& b);  // b sign-definite
ApproxReal neg(const ApproxReal& a);
ApproxReal abs_val(const ApproxReal& a);
ApproxReal sqrt_of(const ApproxReal& a);  // a >= 0
// log of a certified-positive enclosure; DomainError if the interval
// touches zero. err propagates through the monotone endpoints.
ApproxReal log_of(const ApproxReal& a);
ApproxReal exp_of(const ApproxReal& a);
ApproxReal pow_ui(const ApproxReal& a, unsigned long n);  // a >= 0
ApproxReal mul_2exp(const ApproxReal& a, long e);         // exact scaling
ApproxReal mul_int(const ApproxReal& a, const mpz_class& z);
ApproxReal add_int(const ApproxReal& a, const mpz_class& z);

// Exact rational value of a decimal literal like "17.2" or "5.1e31".
mpq_class parse_decimal(const std::string& s);

// a.hi < b.lo (every point of a below every point of b).
bool certainly_less(const ApproxReal& a, const ApproxReal& b);
bool certainly_leq(const ApproxReal& a, const ApproxReal& b);
// The two enclosures intersect (necessary for representing the same value).
bool overlaps(const ApproxReal& a, const ApproxReal& b);

}  // namespace balfib::numerics
