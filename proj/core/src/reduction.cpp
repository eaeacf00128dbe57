#include "balfib/reduction.hpp"

#include <algorithm>

namespace balfib::reduction {

namespace {

using numerics::abs_val;
using numerics::certainly_less;
using numerics::div;
using numerics::log_of;
using numerics::mul_int;
using numerics::sub;

// Nearest-integer distance of an exact rational, in exact arithmetic.
mpq_class exact_nearest_distance(const mpq_class& v) {
  const mpz_class& num = v.get_num();
  const mpz_class& den = v.get_den();
  // round(v) = floor((2 num + den) / (2 den))
  mpz_class n0;
  mpz_class two_num_plus_den = 2 * num + den;
  mpz_class two_den = 2 * den;
  mpz_fdiv_q(n0.get_mpz_t(), two_num_plus_den.get_mpz_t(),
             two_den.get_mpz_t());
  mpq_class d = v - mpq_class(n0);
  d.canonicalize();
  return abs(d);
}

}  // namespace

NearestDistance nearest_int_distance(const RefinableReal& x,
                                     const mpz_class& q,
                                     const PrecisionContext& ctx,
                                     mpfr_prec_t start_bits,
                                     bool require_positive_or_zero) {
  if (x.exact()) {
    mpq_class d = exact_nearest_distance(*x.exact() * mpq_class(q));
    return NearestDistance{
        ApproxReal::from_rational(d, std::max<mpfr_prec_t>(64, start_bits)),
        d == 0};
  }
  mpfr_prec_t bits = ctx.clamp(start_bits);
  while (true) {
    ApproxReal v = mul_int(x.eval(bits), q);
    mpz_class n0 = v.nearest_int_of_mid();
    ApproxReal d = sub(v, ApproxReal::from_integer(n0, v.prec()));
    bool inside = d.certainly_less_than(mpq_class(1, 2)) &&
                  d.certainly_greater_than(mpq_class(-1, 2));
    if (inside) {
      ApproxReal dist = abs_val(d);
      if (!require_positive_or_zero || dist.is_certainly_positive())
        return NearestDistance{dist, false};
    }
    bits = ctx.next(bits);
  }
}

namespace {

ReductionOutcome reduce_impl(const ReductionInstance& inst,
                             ContinuedFraction& cf,
                             const PrecisionContext& ctx) {
  if (inst.A <= 0 || inst.M < 1)
    throw PreconditionError("reduction instance needs A > 0 and M >= 1");
  mpz_class floor_q = 6 * inst.M;
  if (inst.q_floor > floor_q) floor_q = inst.q_floor;
  size_t idx = cf.ensure_q_exceeds(floor_q);

  ReductionOutcome out;
  int zero_attempts = 0;
  for (int t = 0; t < inst.max_convergent_attempts; ++t) {
    size_t i = idx + static_cast<size_t>(t);
    cf.ensure_count(i + 1);
    const mpz_class& q = cf.q(i);
    mpfr_prec_t start = ctx.clamp(static_cast<mpfr_prec_t>(
        mpz_sizeinbase(q.get_mpz_t(), 2) * 2 + 192));
    ++out.attempts;

    NearestDistance mq =
        nearest_int_distance(inst.mu, q, ctx, start, true);
    if (mq.exactly_zero) {
      ++zero_attempts;
      continue;
    }

    // eps = ||mu q|| - M ||tau q||, escalating until its sign is certified.
    for (mpfr_prec_t bits = start;; bits = ctx.next(bits)) {
      if (bits != start)
        mq = nearest_int_distance(inst.mu, q, ctx, bits, true);
      NearestDistance tq =
          nearest_int_distance(inst.tau, q, ctx, bits, false);
      ApproxReal eps = sub(mq.dist, mul_int(tq.dist, inst.M));
      if (eps.is_certainly_positive()) {
        ApproxReal b_val = inst.B.eval(bits);
        ApproxReal log_b = log_of(b_val);
        if (!log_b.is_certainly_positive())
          throw DomainError("reduction needs B > 1");
        ApproxReal aq = mul_int(
            ApproxReal::from_rational(inst.A, bits), q);
        ApproxReal bound = div(log_of(div(aq, eps)), log_b);
        mpz_class cl;
        mpfr_get_z(cl.get_mpz_t(), bound.hi(), MPFR_RNDU);
        out.status = ReductionStatus::Reduced;
        out.q_index = i;
        out.q_used = q;
        out.epsilon = eps;
        out.log_bound = bound;
        out.w_bound = cl.get_si() - 1;
        return out;
      }
      if (eps.is_certainly_negative()) {
        // ||mu q|| down at a 2^-20 fraction of M ||tau q|| marks mu as
        // nearly integer at this scale; nearby convergents cannot flip
        // the sign, so report back for a floor boost instead.
        if (certainly_less(numerics::mul_2exp(mq.dist, 20),
                           mul_int(tq.dist, inst.M))) {
          out.status = ReductionStatus::EpsilonFailed;
          out.near_integer_hint = true;
          return out;
        }
        break;  // try the next convergent
      }
    }
  }
  out.status = ReductionStatus::EpsilonFailed;
  out.mu_degenerate = zero_attempts == out.attempts && out.attempts > 0;
  return out;
}

}  // namespace

ReductionOutcome dujella_petho_reduce(const ReductionInstance& inst,
                                      ContinuedFraction& cf,
                                      const PrecisionContext& ctx) {
  return reduce_impl(inst, cf, ctx);
}

ReductionOutcome dujella_petho_reduce(const ReductionInstance& inst,
                                      const PrecisionContext& ctx) {
  ContinuedFraction cf(inst.tau, ctx);
  return reduce_impl(inst, cf, ctx);
}

ReductionOutcome dujella_petho_reduce_boosted(const ReductionInstance& inst,
                                              ContinuedFraction& cf,
                                              const PrecisionContext& ctx,
                                              int max_boosts) {
  ReductionInstance attempt = inst;
  mpz_class boost;
  mpz_ui_pow_ui(boost.get_mpz_t(), 10, 50);
  ReductionOutcome out;
  for (int b = 0; b <= max_boosts; ++b) {
    out = reduce_impl(attempt, cf, ctx);
    if (out.status == ReductionStatus::Reduced || out.mu_degenerate)
      return out;
    attempt.q_floor = (attempt.q_floor == 0 ? 6 * attempt.M
                                            : attempt.q_floor) *
                      boost;
  }
  return out;
}

LegendreBound legendre_bound(ContinuedFraction& cf, const mpz_class& M) {
  if (M < 1) throw PreconditionError("legendre_bound needs M >= 1");
  size_t n = cf.ensure_q_exceeds(M);
  LegendreBound out{cf.a(0), n};
  for (size_t i = 1; i <= n; ++i) out.a_max = std::max(out.a_max, cf.a(i));
  return out;
}

}  // namespace balfib::reduction
