#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "balfib/approx_real.hpp"
#include "balfib/errors.hpp"
#include "balfib/precision.hpp"

namespace balfib::sequences {

using ExactInt = mpz_class;

enum class SeqKind { balancing, lucas_balancing, kfib };

// Sliding window over the last k terms of a k-step Fibonacci recurrence.
// Produces the next term in O(1) big-int additions via a running sum.
class SequenceWindow {
 public:
  explicit SequenceWindow(int k);

  // Term F_n for the next index (starting at n = 2, i.e. after the seed
  // values F_{-(k-2)} = ... = F_0 = 0, F_1 = 1).
  ExactInt next();
  long next_index() const { return next_index_; }
  int k() const { return k_; }

 private:
  int k_;
  long next_index_;
  size_t head_ = 0;
  std::vector<ExactInt> window_;
  ExactInt running_sum_;
};

// Growable table of F_n^(k), n >= -(k-2). Values below the seed range are
// out of contract and throw.
class KFibTable {
 public:
  explicit KFibTable(int k);
  const ExactInt& at(long n);
  int k() const { return k_; }

 private:
  int k_;
  std::vector<ExactInt> values_;  // index 0 holds n = -(k-2)
  SequenceWindow window_;
};

// B_l: 0, 1, 6, 35, ... with B_{n+1} = 6 B_n - B_{n-1}.
ExactInt balancing(long l);
// C_l: 1, 3, 17, 99, ... same recurrence.
ExactInt lucas_balancing(long l);
// F_n^(k) via a process-wide memo table per k.
ExactInt kfib(int k, long n);

// Certified |F_n^(k) - f_k(phi) phi^(n-1)|; the enclosure upper end is
// verified < 1/2 before returning.
numerics::ApproxReal binet_residual(int k, long n,
                                    const numerics::PrecisionContext& ctx);

// Worst certified residual upper bound over n in [1, n_max] for one k,
// evaluated with a single shared root enclosure.
struct BinetGridResult {
  bool all_below_half;
  long worst_n;
  double worst_upper;
};
BinetGridResult binet_residual_grid(int k, long n_max,
                                    const numerics::PrecisionContext& ctx);

struct GrowthCheckReport {
  size_t checked = 0;
  std::vector<long> violations;
  bool ok() const { return !checked ? false : violations.empty(); }
};

// Certifies gamma^{n-1} <= B_n <= gamma^n, gamma^n <= 2 C_n <= gamma^{n+1},
// or phi^{n-2} <= F_n^(k) <= phi^{n-1} over [n_lo, n_hi].
GrowthCheckReport check_growth_bounds(SeqKind kind, int k, long n_lo,
                                      long n_hi,
                                      const numerics::PrecisionContext& ctx);

// Certified |F_n^(k) / 2^(n-2) - 1| for n >= k+2; asserts < 2^(-k/2)
// (exactly, via squared rational comparison).
numerics::ApproxReal xi_deviation(int k, long n,
                                  const numerics::PrecisionContext& ctx);

// Binet formulas for B_l and C_l as interval identities: the exact integer
// must lie inside (gamma^l -+ delta^l)/(4 sqrt 2) resp. (gamma^l + delta^l)/2.
bool binet_identity_bc(long l_max, mpfr_prec_t bits);

}  // namespace balfib::sequences
