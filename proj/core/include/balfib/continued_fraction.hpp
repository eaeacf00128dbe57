#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "balfib/precision.hpp"
#include "balfib/refinable.hpp"

namespace balfib::reduction {

// Continued fraction of a refinable real with certified partial quotients:
// every a_i is the unique floor of the i-th remainder's enclosure, so the
// printed expansion is the true one. Widening remainders trigger a restart
// of the whole expansion at escalated precision.
class ContinuedFraction {
 public:
  ContinuedFraction(numerics::RefinableReal source,
                    numerics::PrecisionContext ctx);

  // Exact terminating expansion of a rational (Euclid, no intervals).
  static ContinuedFraction from_rational(const mpq_class& value);

  // Extends the expansion to at least `count` quotients. Throws
  // PrecisionExhausted if the remainder floor stays undecidable at max_bits
  // (e.g. a rational fed through the interval path), and stops early only
  // for exact rationals that terminate.
  void ensure_count(size_t count);

  // Index of the first convergent with q_i > bound, extending as needed.
  size_t ensure_q_exceeds(const mpz_class& bound);

  size_t size() const { return a_.size(); }
  bool terminated() const { return terminated_; }
  const std::vector<mpz_class>& partial_quotients() const { return a_; }
  const mpz_class& a(size_t i) const { return a_.at(i); }
  const mpz_class& p(size_t i) const { return pq_.at(i).first; }
  const mpz_class& q(size_t i) const { return pq_.at(i).second; }

 private:
  explicit ContinuedFraction(numerics::PrecisionContext ctx) : ctx_(ctx) {}

  // One full expansion attempt at bits_; returns false when more precision
  // is needed to reach `count` quotients.
  bool expand_at_current_bits(size_t count);
  void push_quotient(const mpz_class& a);

  numerics::RefinableReal source_;
  numerics::PrecisionContext ctx_;
  mpfr_prec_t bits_ = 0;
  bool exact_mode_ = false;
  bool terminated_ = false;
  std::vector<mpz_class> a_;
  std::vector<std::pair<mpz_class, mpz_class>> pq_;
};

}  // namespace balfib::reduction
