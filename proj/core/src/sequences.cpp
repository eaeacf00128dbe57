#include "balfib/sequences.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "balfib/constants.hpp"
#include "balfib/roots.hpp"

namespace balfib::sequences {

using numerics::ApproxReal;
using numerics::PrecisionContext;

SequenceWindow::SequenceWindow(int k) : k_(k), next_index_(2) {
  if (k < 2) throw PreconditionError("k-step recurrence needs k >= 2");
  window_.assign(static_cast<size_t>(k), ExactInt(0));
  window_.back() = 1;  // F_1
  running_sum_ = 1;
}

ExactInt SequenceWindow::next() {
  ExactInt term = running_sum_;
  running_sum_ += term;
  running_sum_ -= window_[head_];
  window_[head_] = term;
  head_ = (head_ + 1) % window_.size();
  ++next_index_;
  return term;
}

KFibTable::KFibTable(int k) : k_(k), window_(k) {
  // Seeds F_{-(k-2)} .. F_0 = 0 and F_1 = 1.
  values_.assign(static_cast<size_t>(k - 1), ExactInt(0));
  values_.push_back(1);
}

const ExactInt& KFibTable::at(long n) {
  long lowest = -(static_cast<long>(k_) - 2);
  if (n < lowest)
    throw PreconditionError("k-Fibonacci index below seed range");
  size_t idx = static_cast<size_t>(n - lowest);
  while (idx >= values_.size()) values_.push_back(window_.next());
  return values_[idx];
}

namespace {

std::mutex g_tables_mutex;

std::vector<ExactInt>& balancing_table() {
  static std::vector<ExactInt> t{0, 1};
  return t;
}

std::vector<ExactInt>& lucas_table() {
  static std::vector<ExactInt> t{1, 3};
  return t;
}

const ExactInt& second_order_term(std::vector<ExactInt>& t, long l) {
  while (static_cast<long>(t.size()) <= l) {
    size_t n = t.size();
    t.push_back(6 * t[n - 1] - t[n - 2]);
  }
  return t[static_cast<size_t>(l)];
}

}  // namespace

ExactInt balancing(long l) {
  if (l < 0) throw PreconditionError("balancing index must be >= 0");
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  return second_order_term(balancing_table(), l);
}

ExactInt lucas_balancing(long l) {
  if (l < 0) throw PreconditionError("lucas-balancing index must be >= 0");
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  return second_order_term(lucas_table(), l);
}

ExactInt kfib(int k, long n) {
  static std::map<int, KFibTable> tables;
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  auto [it, inserted] = tables.try_emplace(k, k);
  return it->second.at(n);
}

namespace {

// Residual enclosure at a given certification level; nullopt = too wide.
std::optional<ApproxReal> residual_at(int k, long n, mpfr_prec_t bits,
                                      const PrecisionContext& ctx) {
  PrecisionContext local(bits, ctx.max_bits, ctx.escalation_factor);
  ApproxReal phi = numerics::dominant_root(k, local);
  ApproxReal f = numerics::f_k_at_root(k, phi);
  ApproxReal predicted =
      mul(f, pow_ui(phi, static_cast<unsigned long>(n - 1)));
  ApproxReal res = abs_val(
      sub(ApproxReal::from_integer(kfib(k, n), bits), predicted));
  if (res.certainly_less_than(mpq_class(1, 2))) return res;
  if (res.certainly_greater_than(mpq_class(1, 2)))
    throw InvariantViolation("Binet residual certified >= 1/2 at k=" +
                             std::to_string(k) + " n=" + std::to_string(n));
  return std::nullopt;
}

}  // namespace

ApproxReal binet_residual(int k, long n, const PrecisionContext& ctx) {
  if (k < 2 || n < 1) throw PreconditionError("binet_residual needs k>=2, n>=1");
  mpfr_prec_t start = ctx.clamp(std::max<mpfr_prec_t>(ctx.working_bits, n + 32));
  for (mpfr_prec_t bits = start;; bits = ctx.next(bits)) {
    if (auto res = residual_at(k, n, bits, ctx)) return *res;
  }
}

BinetGridResult binet_residual_grid(int k, long n_max,
                                    const PrecisionContext& ctx) {
  mpfr_prec_t bits = ctx.clamp(std::max<mpfr_prec_t>(ctx.working_bits,
                                                     n_max + 64));
  PrecisionContext local(bits, ctx.max_bits, ctx.escalation_factor);
  ApproxReal phi = numerics::dominant_root(k, local);
  ApproxReal f = numerics::f_k_at_root(k, phi);

  BinetGridResult out{true, 0, 0.0};
  ApproxReal power = ApproxReal::exact_int(1, bits);  // phi^(n-1) at n = 1
  KFibTable table(k);
  for (long n = 1; n <= n_max; ++n) {
    ApproxReal res = abs_val(
        sub(ApproxReal::from_integer(table.at(n), bits), mul(f, power)));
    if (!res.certainly_less_than(mpq_class(1, 2))) {
      // One slow retry through the adaptive path before giving up.
      ApproxReal retry = binet_residual(k, n, ctx);
      res = retry;
    }
    double ub = mpfr_get_d(res.hi(), MPFR_RNDU);
    if (ub > out.worst_upper) {
      out.worst_upper = ub;
      out.worst_n = n;
    }
    if (!res.certainly_less_than(mpq_class(1, 2))) out.all_below_half = false;
    power = mul(power, phi);
  }
  return out;
}

GrowthCheckReport check_growth_bounds(SeqKind kind, int k, long n_lo,
                                      long n_hi,
                                      const PrecisionContext& ctx) {
  if (n_lo < 1 || n_hi < n_lo)
    throw PreconditionError("bad growth-check index range");
  GrowthCheckReport rep;
  mpfr_prec_t bits = ctx.working_bits;

  if (kind == SeqKind::kfib) {
    PrecisionContext local(ctx.clamp(std::max<mpfr_prec_t>(bits, n_hi + 64)),
                           ctx.max_bits, ctx.escalation_factor);
    ApproxReal phi = numerics::dominant_root(k, local);
    KFibTable table(k);
    for (long n = n_lo; n <= n_hi; ++n) {
      const ExactInt& fn = table.at(n);
      ++rep.checked;
      bool ok_low;
      if (n >= 2) {
        ok_low = pow_ui(phi, static_cast<unsigned long>(n - 2))
                     .certainly_leq(fn);
      } else {
        // n = 1: phi^{-1} <= F_1 = 1 reduces to phi >= 1.
        ok_low = phi.certainly_greater_than(mpz_class(1));
      }
      bool ok_high = pow_ui(phi, static_cast<unsigned long>(n - 1))
                         .certainly_geq(fn);
      if (!(ok_low && ok_high)) rep.violations.push_back(n);
    }
    return rep;
  }

  ApproxReal gamma = numerics::gamma_const(bits);
  for (long n = n_lo; n <= n_hi; ++n) {
    ++rep.checked;
    if (kind == SeqKind::balancing) {
      ExactInt b = balancing(n);
      ApproxReal low = pow_ui(gamma, static_cast<unsigned long>(n - 1));
      ApproxReal high = pow_ui(gamma, static_cast<unsigned long>(n));
      if (!(low.certainly_leq(b) && high.certainly_geq(b)))
        rep.violations.push_back(n);
    } else {
      ExactInt c2 = 2 * lucas_balancing(n);
      ApproxReal low = pow_ui(gamma, static_cast<unsigned long>(n));
      ApproxReal high = pow_ui(gamma, static_cast<unsigned long>(n + 1));
      if (!(low.certainly_leq(c2) && high.certainly_geq(c2)))
        rep.violations.push_back(n);
    }
  }
  return rep;
}

ApproxReal xi_deviation(int k, long n, const PrecisionContext& ctx) {
  if (n < k + 2)
    throw DomainError("xi deviation defined only for n >= k+2");
  ExactInt fn = kfib(k, n);
  ExactInt p2 = ExactInt(1) << static_cast<unsigned long>(n - 2);
  mpq_class dev(abs(fn - p2), p2);
  dev.canonicalize();
  // |xi| < 2^(-k/2)  <=>  xi^2 * 2^k < 1, checked in exact arithmetic.
  mpq_class sq = dev * dev;
  sq *= mpq_class(ExactInt(1) << static_cast<unsigned long>(k));
  if (sq >= 1)
    throw InvariantViolation("xi deviation >= 2^(-k/2) at k=" +
                             std::to_string(k) + " n=" + std::to_string(n));
  return ApproxReal::from_rational(dev, ctx.working_bits);
}

bool binet_identity_bc(long l_max, mpfr_prec_t bits) {
  ApproxReal gamma = numerics::gamma_const(bits);
  ApproxReal delta = numerics::delta_const(bits);
  ApproxReal four_sqrt2 = numerics::mul_2exp(numerics::sqrt2(bits), 2);
  for (long l = 1; l <= l_max; ++l) {
    ApproxReal gl = pow_ui(gamma, static_cast<unsigned long>(l));
    ApproxReal dl = pow_ui(delta, static_cast<unsigned long>(l));
    ApproxReal b_formula = div(sub(gl, dl), four_sqrt2);
    ApproxReal c_formula = numerics::mul_2exp(add(gl, dl), -1);
    if (!b_formula.contains(balancing(l))) return false;
    if (!c_formula.contains(lucas_balancing(l))) return false;
  }
  return true;
}

}  // namespace balfib::sequences
