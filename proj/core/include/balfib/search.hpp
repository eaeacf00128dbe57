#pragma once

#include <optional>
#include <string>
#include <vector>

#include "balfib/linforms.hpp"
#include "balfib/sequences.hpp"

namespace balfib::search {

using linforms::TheoremTag;
using sequences::ExactInt;

// One verified tuple B_l (or C_l) = F_n^(k) * F_m^(k).
struct SolutionRecord {
  TheoremTag equation = TheoremTag::balancing;
  long l = 0;
  int k = 0;
  long n = 0;
  long m = 0;
  ExactInt value;

  friend bool operator==(const SolutionRecord& a, const SolutionRecord& b) {
    return a.equation == b.equation && a.l == b.l && a.k == b.k &&
           a.n == b.n && a.m == b.m && a.value == b.value;
  }
};

// Sorted table of B_l (or C_l) values for l in [1, l_max], with exact
// binary-search membership lookup.
class TargetIndex {
 public:
  TargetIndex(TheoremTag equation, long l_max);

  // Index l with target(l) == v, if any.
  std::optional<long> lookup(const ExactInt& v) const;
  const ExactInt& max_value() const { return values_.back(); }
  TheoremTag equation() const { return equation_; }
  long l_max() const { return l_max_; }

 private:
  TheoremTag equation_;
  long l_max_;
  std::vector<ExactInt> values_;  // values_[i] = target(i+1)
};

struct BoxOptions {
  int jobs = 1;
};

// All (l, k, n, m) with k in [k_lo, k_hi], 1 <= m <= n <= n_max,
// 1 <= l <= l_max and F_n^(k) F_m^(k) equal to the target sequence at l,
// sorted by (k, n, m, l). Distinct index pairs with equal values (F_1 vs
// F_2) are all reported.
std::vector<SolutionRecord> brute_force_box(TheoremTag equation, int k_lo,
                                            int k_hi, long n_max, long l_max,
                                            const BoxOptions& opt = {});

// The power-of-two window 2 <= n <= k+1: every product there is a power of
// two, so only power-of-two targets can match. Reports which B_l / C_l up
// to 2^(2k-2) are powers of two (expected: B_1 = 2^0 only, none for C).
struct PrefixCaseReport {
  struct Hit {
    int k;
    long l;
    long exponent;  // target == 2^exponent
  };
  std::vector<Hit> hits;
  size_t targets_scanned = 0;
  bool only_trivial() const {
    for (const auto& h : hits)
      if (h.l != 1) return false;
    return true;
  }
};
PrefixCaseReport prefix_case_check(TheoremTag equation, int k_lo, int k_hi,
                                   long l_max);

// Recomputes both sides through independent paths (fresh recurrences vs
// the memoized tables) and checks the record exactly.
bool certify_solution(const SolutionRecord& rec);

// The solution lists of the two theorems, restricted to a box; the
// expected output of brute_force_box on that box.
std::vector<SolutionRecord> expected_solutions(TheoremTag equation, int k_lo,
                                               int k_hi, long n_max,
                                               long l_max);

std::string to_json_line(const SolutionRecord& rec);

}  // namespace balfib::search
