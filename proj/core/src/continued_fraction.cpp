#include "balfib/continued_fraction.hpp"

#include <algorithm>

#include "balfib/errors.hpp"

namespace balfib::reduction {

using numerics::ApproxReal;

ContinuedFraction::ContinuedFraction(numerics::RefinableReal source,
                                     numerics::PrecisionContext ctx)
    : source_(std::move(source)), ctx_(ctx), bits_(ctx.working_bits) {}

ContinuedFraction ContinuedFraction::from_rational(const mpq_class& value) {
  ContinuedFraction cf{numerics::PrecisionContext{}};
  cf.exact_mode_ = true;
  cf.terminated_ = true;
  mpz_class num = value.get_num(), den = value.get_den();
  while (den != 0) {
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                den.get_mpz_t());
    cf.push_quotient(a);
    num = den;
    den = r;
  }
  return cf;
}

void ContinuedFraction::push_quotient(const mpz_class& a) {
  size_t i = a_.size();
  if (i >= 1 && a < 1)
    throw InvariantViolation("partial quotient a_i < 1 for i >= 1");
  mpz_class p, q;
  if (i == 0) {
    p = a;
    q = 1;
  } else {
    const mpz_class& p1 = pq_[i - 1].first;
    const mpz_class& q1 = pq_[i - 1].second;
    mpz_class p2 = i >= 2 ? pq_[i - 2].first : mpz_class(1);
    mpz_class q2 = i >= 2 ? pq_[i - 2].second : mpz_class(0);
    p = a * p1 + p2;
    q = a * q1 + q2;
    mpz_class det = p * q1 - p1 * q;
    if (det != (i % 2 == 1 ? 1 : -1))
      throw InvariantViolation("convergent determinant identity broken");
    if (i >= 2 && q <= q1)
      throw InvariantViolation("convergent denominators not increasing");
  }
  a_.push_back(a);
  pq_.emplace_back(std::move(p), std::move(q));
}

bool ContinuedFraction::expand_at_current_bits(size_t count) {
  std::vector<mpz_class> fresh;
  ApproxReal rem = source_.eval(bits_);
  while (fresh.size() < count) {
    auto fl = rem.certified_floor();
    if (!fl) break;
    fresh.push_back(*fl);
    ApproxReal frac = sub(rem, ApproxReal::from_integer(*fl, rem.prec()));
    if (!frac.is_certainly_positive()) break;  // needs a tighter enclosure
    rem = div(ApproxReal::exact_int(1, rem.prec()), frac);
  }

  // The certified prefix is unique, so a rebuild at higher precision must
  // reproduce it; mismatch would mean broken interval arithmetic.
  size_t common = std::min(fresh.size(), a_.size());
  for (size_t i = 0; i < common; ++i)
    if (fresh[i] != a_[i])
      throw InvariantViolation("continued fraction prefix changed");
  for (size_t i = a_.size(); i < fresh.size(); ++i) push_quotient(fresh[i]);
  return a_.size() >= count;
}

void ContinuedFraction::ensure_count(size_t count) {
  if (exact_mode_ || a_.size() >= count) return;
  // Denominators grow at least like 2^(i/2); start near the expected need.
  mpfr_prec_t wanted = static_cast<mpfr_prec_t>(4 * count + 128);
  bits_ = std::max(bits_, ctx_.clamp(wanted));
  while (!expand_at_current_bits(count)) bits_ = ctx_.next(bits_);
}

size_t ContinuedFraction::ensure_q_exceeds(const mpz_class& bound) {
  size_t bound_bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  if (!exact_mode_) {
    mpfr_prec_t wanted =
        static_cast<mpfr_prec_t>(bound_bits * 12 / 5 + 192);
    bits_ = std::max(bits_, ctx_.clamp(wanted));
  }
  size_t i = 0;
  while (true) {
    if (i >= size()) {
      if (terminated() || exact_mode_)
        throw DomainError("terminating expansion never exceeds bound");
      ensure_count(size() + 16);
    }
    if (q(i) > bound) return i;
    ++i;
  }
}

}  // namespace balfib::reduction
