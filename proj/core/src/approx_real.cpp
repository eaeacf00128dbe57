#include "balfib/approx_real.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <vector>

namespace balfib::numerics {

namespace {

// Scratch mpfr value with RAII cleanup.
struct Scratch {
  mpfr_t v;
  explicit Scratch(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

}  // namespace

// Exact rational value of a decimal literal like "17.2", "-5.1e31", "3".
mpq_class parse_decimal(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw ConfigError("empty decimal literal");

  bool negative = false;
  size_t i = 0;
  if (t[i] == '+' || t[i] == '-') {
    negative = t[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_len = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) ||
                          t[i] == '.');
       ++i) {
    if (t[i] == '.') {
      if (seen_dot) throw ConfigError("bad decimal literal: " + s);
      seen_dot = true;
    } else {
      digits.push_back(t[i]);
      seen_digit = true;
      if (seen_dot) ++frac_len;
    }
  }
  if (!seen_digit) throw ConfigError("bad decimal literal: " + s);
  long exp10 = 0;
  if (i < t.size()) {
    if (t[i] != 'e' && t[i] != 'E')
      throw ConfigError("bad decimal literal: " + s);
    exp10 = std::stol(t.substr(i + 1));
  }

  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long net = exp10 - frac_len;
  mpz_class pow10;
  mpq_class q;
  if (net >= 0) {
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net));
    q = mpq_class(mantissa * pow10);
  } else {
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(-net));
    q = mpq_class(mantissa, pow10);
  }
  q.canonicalize();
  return q;
}

namespace {

std::string format_mpfr(mpfr_srcptr x, size_t digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(x)) return "0";
  if (digits < 2) digits = 2;
  mpfr_exp_t e;
  char* raw = mpfr_get_str(nullptr, &e, 10, digits, x, rnd);
  std::string m(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!m.empty() && m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  // mpfr_get_str mantissa means 0.<m> * 10^e; normalize to d.ddd e(e-1).
  std::string out = sign + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  out += "e" + std::to_string(static_cast<long>(e - 1));
  return out;
}

}  // namespace

ApproxReal::ApproxReal() : ApproxReal(RawTag{}, 64) {
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

ApproxReal::ApproxReal(RawTag, mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
}

ApproxReal::ApproxReal(const ApproxReal& o) : ApproxReal(RawTag{}, o.prec_) {
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

ApproxReal::ApproxReal(ApproxReal&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, 2);
  mpfr_init2(hi_, 2);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

ApproxReal& ApproxReal::operator=(const ApproxReal& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.prec_);
    mpfr_set_prec(hi_, o.prec_);
    prec_ = o.prec_;
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

ApproxReal& ApproxReal::operator=(ApproxReal&& o) noexcept {
  if (this != &o) {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    prec_ = o.prec_;
  }
  return *this;
}

ApproxReal::~ApproxReal() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

ApproxReal ApproxReal::exact_int(long v, mpfr_prec_t prec) {
  ApproxReal r = ApproxReal::raw(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

ApproxReal ApproxReal::from_integer(const mpz_class& z, mpfr_prec_t prec) {
  ApproxReal r = ApproxReal::raw(prec);
  mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
  return r;
}

ApproxReal ApproxReal::from_rational(const mpq_class& q, mpfr_prec_t prec) {
  ApproxReal r = ApproxReal::raw(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

ApproxReal ApproxReal::from_decimal(const std::string& s, mpfr_prec_t prec) {
  return from_rational(parse_decimal(s), prec);
}

ApproxReal ApproxReal::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi,
                                      mpfr_prec_t prec) {
  if (mpfr_cmp(lo, hi) > 0) throw InvariantViolation("interval lo > hi");
  ApproxReal r = ApproxReal::raw(prec);
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  return r;
}

ApproxReal ApproxReal::from_midpoint_err(const std::string& mid_decimal,
                                         const std::string& err_decimal,
                                         mpfr_prec_t prec) {
  mpq_class mid = parse_decimal(mid_decimal);
  mpq_class err = parse_decimal(err_decimal);
  if (err < 0) throw CacheInvalid("negative err field");
  ApproxReal r = ApproxReal::raw(prec);
  mpq_class lo = mid - err, hi = mid + err;
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

bool ApproxReal::is_exact() const { return mpfr_equal_p(lo_, hi_); }

bool ApproxReal::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool ApproxReal::is_certainly_positive() const { return mpfr_sgn(lo_) > 0; }

bool ApproxReal::is_certainly_negative() const { return mpfr_sgn(hi_) < 0; }

bool ApproxReal::contains(const mpz_class& z) const {
  return mpfr_cmp_z(lo_, z.get_mpz_t()) <= 0 &&
         mpfr_cmp_z(hi_, z.get_mpz_t()) >= 0;
}

bool ApproxReal::contains(const mpq_class& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool ApproxReal::certainly_less_than(const mpz_class& z) const {
  return mpfr_cmp_z(hi_, z.get_mpz_t()) < 0;
}

bool ApproxReal::certainly_greater_than(const mpz_class& z) const {
  return mpfr_cmp_z(lo_, z.get_mpz_t()) > 0;
}

bool ApproxReal::certainly_less_than(const mpq_class& q) const {
  return mpfr_cmp_q(hi_, q.get_mpq_t()) < 0;
}

bool ApproxReal::certainly_greater_than(const mpq_class& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) > 0;
}

bool ApproxReal::certainly_leq(const mpz_class& z) const {
  return mpfr_cmp_z(hi_, z.get_mpz_t()) <= 0;
}

bool ApproxReal::certainly_geq(const mpz_class& z) const {
  return mpfr_cmp_z(lo_, z.get_mpz_t()) >= 0;
}

bool ApproxReal::abs_below_2exp(long e) const {
  Scratch t(64);
  mpfr_set_ui_2exp(t.v, 1, e, MPFR_RNDN);  // exact
  return mpfr_cmpabs(lo_, t.v) < 0 && mpfr_cmpabs(hi_, t.v) < 0;
}

bool ApproxReal::width_below_2exp(long e) const {
  Scratch w(64);
  mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
  Scratch t(64);
  mpfr_set_ui_2exp(t.v, 1, e, MPFR_RNDN);
  return mpfr_cmp(w.v, t.v) < 0;
}

std::optional<mpz_class> ApproxReal::certified_floor() const {
  mpz_class fl, fh;
  mpfr_get_z(fl.get_mpz_t(), lo_, MPFR_RNDD);
  mpfr_get_z(fh.get_mpz_t(), hi_, MPFR_RNDD);
  if (fl == fh) return fl;
  return std::nullopt;
}

std::optional<mpz_class> ApproxReal::certified_ceil() const {
  mpz_class cl, ch;
  mpfr_get_z(cl.get_mpz_t(), lo_, MPFR_RNDU);
  mpfr_get_z(ch.get_mpz_t(), hi_, MPFR_RNDU);
  if (cl == ch) return cl;
  return std::nullopt;
}

mpz_class ApproxReal::nearest_int_of_mid() const {
  Scratch m(prec_ + 2);
  mpfr_add(m.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2si(m.v, m.v, 1, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), m.v, MPFR_RNDN);
  return z;
}

double ApproxReal::to_double() const {
  Scratch m(64);
  mpfr_add(m.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2si(m.v, m.v, 1, MPFR_RNDN);
  return mpfr_get_d(m.v, MPFR_RNDN);
}

std::string ApproxReal::midpoint_string(size_t digits) const {
  Scratch m(prec_ + 2);
  mpfr_add(m.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2si(m.v, m.v, 1, MPFR_RNDN);
  return format_mpfr(m.v, digits, MPFR_RNDN);
}

std::string ApproxReal::err_string() const {
  Scratch r(64);
  mpfr_sub(r.v, hi_, lo_, MPFR_RNDU);
  mpfr_div_2si(r.v, r.v, 1, MPFR_RNDU);
  // The midpoint itself is rounded when printed; cover that by one ulp of
  // the wider endpoint so mid-as-printed +- err still encloses.
  if (!mpfr_zero_p(r.v)) {
    Scratch ulp(64);
    mpfr_set_ui_2exp(ulp.v, 1,
                     std::max(mpfr_get_exp(hi_), mpfr_get_exp(lo_)) -
                         static_cast<long>(prec_) + 2,
                     MPFR_RNDU);
    mpfr_add(r.v, r.v, ulp.v, MPFR_RNDU);
  }
  return format_mpfr(r.v, 6, MPFR_RNDU);
}

ApproxReal ApproxReal::rounded_to(mpfr_prec_t prec) const {
  ApproxReal r = ApproxReal::raw(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

ApproxReal ApproxReal::widened_by_2exp(long e) const {
  ApproxReal r = ApproxReal::raw(prec_);
  Scratch t(64);
  mpfr_set_ui_2exp(t.v, 1, e, MPFR_RNDN);
  mpfr_sub(r.lo_, lo_, t.v, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, t.v, MPFR_RNDU);
  return r;
}

ApproxReal add(const ApproxReal& a, const ApproxReal& b) {
  ApproxReal r = ApproxReal::raw(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

ApproxReal sub(const ApproxReal& a, const ApproxReal& b) {
  ApproxReal r = ApproxReal::raw(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

ApproxReal mul(const ApproxReal& a, const ApproxReal& b) {
  mpfr_prec_t p = std::max(a.prec_, b.prec_);
  ApproxReal r = ApproxReal::raw(p);
  if (mpfr_sgn(a.lo_) >= 0 && mpfr_sgn(b.lo_) >= 0) {
    mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  // General case: outward min/max over the four endpoint products.
  Scratch c1(p), c2(p), c3(p), c4(p);
  mpfr_mul(c1.v, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_mul(c2.v, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_mul(c3.v, a.hi_, b.lo_, MPFR_RNDD);
  mpfr_mul(c4.v, a.hi_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, c1.v, c2.v, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, c3.v, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, c4.v, MPFR_RNDD);
  mpfr_mul(c1.v, a.lo_, b.lo_, MPFR_RNDU);
  mpfr_mul(c2.v, a.lo_, b.hi_, MPFR_RNDU);
  mpfr_mul(c3.v, a.hi_, b.lo_, MPFR_RNDU);
  mpfr_mul(c4.v, a.hi_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, c1.v, c2.v, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, c3.v, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, c4.v, MPFR_RNDU);
  return r;
}

ApproxReal div(const ApproxReal& a, const ApproxReal& b) {
  if (b.contains_zero()) throw DomainError("division by interval spanning 0");
  mpfr_prec_t p = std::max(a.prec_, b.prec_);
  ApproxReal r = ApproxReal::raw(p);
  if (mpfr_sgn(a.lo_) >= 0 && mpfr_sgn(b.lo_) > 0) {
    mpfr_div(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_div(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  Scratch c1(p), c2(p), c3(p), c4(p);
  mpfr_div(c1.v, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_div(c2.v, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_div(c3.v, a.hi_, b.lo_, MPFR_RNDD);
  mpfr_div(c4.v, a.hi_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, c1.v, c2.v, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, c3.v, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, c4.v, MPFR_RNDD);
  mpfr_div(c1.v, a.lo_, b.lo_, MPFR_RNDU);
  mpfr_div(c2.v, a.lo_, b.hi_, MPFR_RNDU);
  mpfr_div(c3.v, a.hi_, b.lo_, MPFR_RNDU);
  mpfr_div(c4.v, a.hi_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, c1.v, c2.v, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, c3.v, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, c4.v, MPFR_RNDU);
  return r;
}

ApproxReal neg(const ApproxReal& a) {
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

ApproxReal abs_val(const ApproxReal& a) {
  if (mpfr_sgn(a.lo_) >= 0) return a;
  if (mpfr_sgn(a.hi_) <= 0) return neg(a);
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_set_zero(r.lo_, 1);
  Scratch t(a.prec_);
  mpfr_neg(t.v, a.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, t.v, a.hi_, MPFR_RNDU);
  return r;
}

ApproxReal sqrt_of(const ApproxReal& a) {
  if (mpfr_sgn(a.lo_) < 0) throw DomainError("sqrt of interval below 0");
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

ApproxReal log_of(const ApproxReal& a) {
  if (mpfr_sgn(a.lo_) <= 0) throw DomainError("log of interval touching 0");
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

ApproxReal exp_of(const ApproxReal& a) {
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

ApproxReal pow_ui(const ApproxReal& a, unsigned long n) {
  if (n == 0) return ApproxReal::exact_int(1, a.prec_);
  if (mpfr_sgn(a.lo_) < 0) throw DomainError("pow_ui needs base >= 0");
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_pow_ui(r.lo_, a.lo_, n, MPFR_RNDD);
  mpfr_pow_ui(r.hi_, a.hi_, n, MPFR_RNDU);
  return r;
}

ApproxReal mul_2exp(const ApproxReal& a, long e) {
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_mul_2si(r.lo_, a.lo_, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, a.hi_, e, MPFR_RNDU);
  return r;
}

ApproxReal mul_int(const ApproxReal& a, const mpz_class& z) {
  ApproxReal r = ApproxReal::raw(a.prec_);
  if (mpz_sgn(z.get_mpz_t()) >= 0) {
    mpfr_mul_z(r.lo_, a.lo_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(r.hi_, a.hi_, z.get_mpz_t(), MPFR_RNDU);
  } else {
    mpfr_mul_z(r.lo_, a.hi_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(r.hi_, a.lo_, z.get_mpz_t(), MPFR_RNDU);
  }
  return r;
}

ApproxReal add_int(const ApproxReal& a, const mpz_class& z) {
  ApproxReal r = ApproxReal::raw(a.prec_);
  mpfr_add_z(r.lo_, a.lo_, z.get_mpz_t(), MPFR_RNDD);
  mpfr_add_z(r.hi_, a.hi_, z.get_mpz_t(), MPFR_RNDU);
  return r;
}

bool certainly_less(const ApproxReal& a, const ApproxReal& b) {
  return mpfr_cmp(a.hi(), b.lo()) < 0;
}

bool certainly_leq(const ApproxReal& a, const ApproxReal& b) {
  return mpfr_cmp(a.hi(), b.lo()) <= 0;
}

bool overlaps(const ApproxReal& a, const ApproxReal& b) {
  return mpfr_cmp(a.lo(), b.hi()) <= 0 && mpfr_cmp(b.lo(), a.hi()) <= 0;
}

}  // namespace balfib::numerics
