#pragma once

#include <vector>

#include "balfib/approx_real.hpp"
#include "balfib/precision.hpp"
#include "balfib/sequences.hpp"

namespace balfib::linforms {

using numerics::ApproxReal;
using numerics::PrecisionContext;
using sequences::ExactInt;

enum class TheoremTag { balancing, lucas };

// Parameters of one application of the lower bound
//   -log|Lambda| <= 1.4 * 30^{s+3} * s^{4.5} * d^2 (1+log d)(1+log D) * prod B_j.
struct MatveevInstance {
  int s = 1;
  int degree = 1;
  std::vector<ApproxReal> b_list;
  ApproxReal d_cap;
};

// The right-hand side above, as a certified enclosure. DomainError on
// nonpositive s/degree/D/B_j.
ApproxReal matveev_lower_bound(const MatveevInstance& inst);

// 1.4 * 30^{s+3} * s^{4.5} alone.
ApproxReal matveev_leading_constant(int s, mpfr_prec_t bits);

struct HeightBudget {
  int k;
  ApproxReal h_eta3_bound;
  TheoremTag which_theorem;
};

// Packaged height bound for the third algebraic number of the first
// application: 6.7 log k (balancing, k >= 3) or 8.2 log k (lucas, k >= 2).
HeightBudget height_budget(TheoremTag tag, int k, mpfr_prec_t bits);

// Exact floor of the strict bounds l < 0.8n + 0.2 resp. l < 0.8n - 0.4,
// computed in rational arithmetic: floor((4n+1)/5) resp. floor((4n-2)/5).
ExactInt l_upper_bound(TheoremTag tag, const ExactInt& n);

// 2^m * S * (log S)^m; PreconditionError unless S >= (4 m^2)^m.
ApproxReal sanchez_bound(int m, const ApproxReal& S);

// M_k = floor(c k^8 log^5 k), c = 5.1e31 (balancing, k >= 3) or 3.28e32
// (lucas, k >= 2), with the floor certified by outward rounding.
ExactInt derive_n_bound(TheoremTag tag, int k, const PrecisionContext& ctx);

// The same bound recomputed from the raw constant chain (two Matveev
// applications plus the x/(log x)^m inversion); upper enclosure.
ApproxReal derive_n_bound_chain(TheoremTag tag, int k,
                                const PrecisionContext& ctx);

// c(a) = -log(1-a)/a, so |log(1+x)| < c(a) |x| whenever |x| < a < 1.
ApproxReal log_smoothing_constant(const mpq_class& a, mpfr_prec_t bits);

// Linear forms Lambda_1 .. Lambda_6 evaluated at explicit indices, for
// nonvanishing sanity checks at the known solutions.
ApproxReal lambda_value(int which, long l, int k, long n, long m,
                        const PrecisionContext& ctx);

// The intermediate slack facts gating the packaged constants, re-verified
// as certified predicates rather than trusted:
//   1 + log 2k <= c log k from k_lo upward (c = 2.6 at 3, 3.5 at 2), and
//   1 + log 2n <= c log n from n_lo upward (2.1 at 5, 2.3 at 4), etc.
// Each is decreasing in its argument, so the boundary check plus a grid
// spans the claim; grid_hi extends the sampled range.
bool slack_ratio_certified(const mpq_class& c, long x_lo, bool doubled_arg,
                           long grid_hi, mpfr_prec_t bits);

// log(c k^8 log^5 k) <= cap * log k over [k_lo, grid_hi], certified.
bool log_n_bound_slack_certified(TheoremTag tag, const mpq_class& cap,
                                 long k_lo, long grid_hi, mpfr_prec_t bits);

// Chain behind the large-k elimination openers: the two-term Matveev bound
// giving k < coef * log n, then the packaged k/n ceilings.
struct LargeKChain {
  ApproxReal matveev_log_n_coef;  // ours
  mpq_class paper_log_n_coef;     // 1.1e13 resp. 8.52e10
  ApproxReal k_bound_chain;
  ApproxReal n_bound_chain;
  mpq_class k_packaged;  // 5.7e16 resp. 5.82e14
  mpq_class n_packaged;  // 4.86e173 resp. 1.97e158
  bool dominated = false;
};
LargeKChain large_k_initial_chain(TheoremTag tag, const PrecisionContext& ctx);

}  // namespace balfib::linforms
