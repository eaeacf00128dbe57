#pragma once

#include <optional>
#include <string>

#include "balfib/continued_fraction.hpp"
#include "balfib/precision.hpp"
#include "balfib/refinable.hpp"

namespace balfib::reduction {

using numerics::ApproxReal;
using numerics::PrecisionContext;
using numerics::RefinableReal;

// One application of the reduction lemma to 0 < |u tau - v + mu| < A B^-w
// with u <= M: find a convergent denominator q > 6M of tau for which
// eps = ||mu q|| - M ||tau q|| > 0.
struct ReductionInstance {
  RefinableReal tau;
  RefinableReal mu;
  mpq_class A;      // > 0
  RefinableReal B;  // > 1
  mpz_class M;      // >= 1
  int max_convergent_attempts = 32;
  // Convergent selection starts at the first q above max(6M, q_floor).
  // Raising the floor rescues instances whose mu sits exponentially close
  // to an integer, where ||mu q|| only overtakes M ||tau q|| for q far
  // beyond 6M.
  mpz_class q_floor = 0;
};

enum class ReductionStatus { Reduced, EpsilonFailed };

struct ReductionOutcome {
  ReductionStatus status = ReductionStatus::EpsilonFailed;
  size_t q_index = 0;
  mpz_class q_used;
  ApproxReal epsilon;    // certified positive when Reduced
  ApproxReal log_bound;  // log(A q / eps) / log B
  // Largest integer w a solution could still have: ceil(upper(log_bound))-1.
  long w_bound = 0;
  // Every attempted convergent had ||mu q|| exactly 0 (mu degenerate,
  // an integer combination of 1 and tau): use the Legendre route instead.
  bool mu_degenerate = false;
  // ||mu q|| came out orders of magnitude below M ||tau q||: mu is nearly
  // an integer at this scale and only a much larger q can work.
  bool near_integer_hint = false;
  int attempts = 0;
};

// Certified distance from x*q to the nearest integer. Exact when x is a
// known rational; otherwise escalates until the enclosure stays within
// (-1/2, 1/2) around one integer (and, when require_positive_or_zero, until
// its sign is settled rather than straddling zero).
struct NearestDistance {
  ApproxReal dist;
  bool exactly_zero = false;
};
NearestDistance nearest_int_distance(const RefinableReal& x,
                                     const mpz_class& q,
                                     const PrecisionContext& ctx,
                                     mpfr_prec_t start_bits,
                                     bool require_positive_or_zero);

ReductionOutcome dujella_petho_reduce(const ReductionInstance& inst,
                                      ContinuedFraction& cf,
                                      const PrecisionContext& ctx);
ReductionOutcome dujella_petho_reduce(const ReductionInstance& inst,
                                      const PrecisionContext& ctx);

// Retry policy around the plain reduction: on EpsilonFailed, raise the
// convergent floor by 10^50 and run again, up to max_boosts times.
ReductionOutcome dujella_petho_reduce_boosted(const ReductionInstance& inst,
                                              ContinuedFraction& cf,
                                              const PrecisionContext& ctx,
                                              int max_boosts = 6);

// Legendre-style bound: the minimal N with q_N > M and the largest partial
// quotient a_i, i <= N, giving |x tau - y| > 1/((a_max + 2) x) for x < M.
struct LegendreBound {
  mpz_class a_max;
  size_t n_index;
};
LegendreBound legendre_bound(ContinuedFraction& cf, const mpz_class& M);

}  // namespace balfib::reduction
