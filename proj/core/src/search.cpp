#include "balfib/search.hpp"

#include <algorithm>
#include <thread>

namespace balfib::search {

namespace {

ExactInt target_term(TheoremTag eq, long l) {
  return eq == TheoremTag::balancing ? sequences::balancing(l)
                                     : sequences::lucas_balancing(l);
}

}  // namespace

TargetIndex::TargetIndex(TheoremTag equation, long l_max)
    : equation_(equation), l_max_(l_max) {
  if (l_max < 1) throw PreconditionError("TargetIndex needs l_max >= 1");
  values_.reserve(static_cast<size_t>(l_max));
  ExactInt prev = -1;
  for (long l = 1; l <= l_max; ++l) {
    values_.push_back(target_term(equation_, l));
    if (values_.back() <= prev)
      throw InvariantViolation("target values not strictly increasing");
    prev = values_.back();
  }
}

std::optional<long> TargetIndex::lookup(const ExactInt& v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return std::nullopt;
  return static_cast<long>(it - values_.begin()) + 1;
}

std::vector<SolutionRecord> brute_force_box(TheoremTag equation, int k_lo,
                                            int k_hi, long n_max, long l_max,
                                            const BoxOptions& opt) {
  std::vector<SolutionRecord> out;
  if (k_lo > k_hi || n_max < 1 || l_max < 1) return out;
  TargetIndex targets(equation, l_max);

  std::vector<int> ks;
  for (int k = std::max(k_lo, 2); k <= k_hi; ++k) ks.push_back(k);
  std::vector<std::vector<SolutionRecord>> slots(ks.size());

  auto scan_k = [&](size_t slot) {
    int k = ks[slot];
    sequences::KFibTable table(k);
    std::vector<SolutionRecord>& hits = slots[slot];
    for (long n = 1; n <= n_max; ++n) {
      const ExactInt& fn = table.at(n);
      for (long m = 1; m <= n; ++m) {
        ExactInt prod = fn * table.at(m);
        if (prod > targets.max_value()) break;  // products ascend in m
        if (auto l = targets.lookup(prod))
          hits.push_back(SolutionRecord{equation, *l, k, n, m, prod});
      }
    }
  };

  int jobs = std::max(1, opt.jobs);
  if (jobs == 1 || ks.size() <= 1) {
    for (size_t i = 0; i < ks.size(); ++i) scan_k(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (size_t i = static_cast<size_t>(w); i < ks.size();
             i += static_cast<size_t>(jobs))
          scan_k(i);
      });
    for (auto& t : pool) t.join();
  }

  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.k, a.n, a.m, a.l) < std::tie(b.k, b.n, b.m, b.l);
  });
  return out;
}

PrefixCaseReport prefix_case_check(TheoremTag equation, int k_lo, int k_hi,
                                   long l_max) {
  PrefixCaseReport rep;
  for (int k = std::max(k_lo, 2); k <= k_hi; ++k) {
    ExactInt cap = ExactInt(1) << static_cast<unsigned long>(2 * k - 2);
    for (long l = 1; l <= l_max; ++l) {
      ExactInt v = target_term(equation, l);
      if (v > cap) break;
      ++rep.targets_scanned;
      if (v > 0 && mpz_popcount(v.get_mpz_t()) == 1) {
        long e = static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1;
        rep.hits.push_back(PrefixCaseReport::Hit{k, l, e});
      }
    }
  }
  return rep;
}

bool certify_solution(const SolutionRecord& rec) {
  if (rec.m < 1 || rec.m > rec.n || rec.l < 1 || rec.k < 2) return false;
  // Left side by a fresh two-term recurrence, no shared tables.
  ExactInt prev = rec.equation == TheoremTag::balancing ? 0 : 1;
  ExactInt cur = rec.equation == TheoremTag::balancing ? 1 : 3;
  for (long i = 1; i < rec.l; ++i) {
    ExactInt next = 6 * cur - prev;
    prev = cur;
    cur = next;
  }
  const ExactInt& lhs = rec.l == 0 ? prev : cur;
  // Right side through the memoized module tables.
  ExactInt rhs = sequences::kfib(rec.k, rec.n) * sequences::kfib(rec.k, rec.m);
  return lhs == rhs && lhs == rec.value;
}

std::vector<SolutionRecord> expected_solutions(TheoremTag equation, int k_lo,
                                               int k_hi, long n_max,
                                               long l_max) {
  std::vector<SolutionRecord> out;
  if (equation == TheoremTag::balancing) {
    // B_1 = F_1 F_1 = F_1 F_2 = F_2 F_2 for every k, plus
    // B_6 = F_1^(5) F_15^(5) = F_2^(5) F_15^(5).
    for (int k = std::max(k_lo, 3); k <= k_hi; ++k) {
      if (l_max >= 1 && n_max >= 1)
        out.push_back({equation, 1, k, 1, 1, ExactInt(1)});
      if (l_max >= 1 && n_max >= 2) {
        out.push_back({equation, 1, k, 2, 1, ExactInt(1)});
        out.push_back({equation, 1, k, 2, 2, ExactInt(1)});
      }
      if (k == 5 && n_max >= 15 && l_max >= 6) {
        out.push_back({equation, 6, k, 15, 1, ExactInt(6930)});
        out.push_back({equation, 6, k, 15, 2, ExactInt(6930)});
      }
    }
  } else {
    // C_1 = F_1^(2) F_4^(2) = F_2^(2) F_4^(2).
    if (k_lo <= 2 && 2 <= k_hi && n_max >= 4 && l_max >= 1) {
      out.push_back({equation, 1, 2, 4, 1, ExactInt(3)});
      out.push_back({equation, 1, 2, 4, 2, ExactInt(3)});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.k, a.n, a.m, a.l) < std::tie(b.k, b.n, b.m, b.l);
  });
  return out;
}

std::string to_json_line(const SolutionRecord& rec) {
  std::string eq = rec.equation == TheoremTag::balancing ? "B" : "C";
  return "{\"equation\":\"" + eq + "\",\"l\":" + std::to_string(rec.l) +
         ",\"k\":" + std::to_string(rec.k) + ",\"n\":" +
         std::to_string(rec.n) + ",\"m\":" + std::to_string(rec.m) +
         ",\"value\":\"" + rec.value.get_str() + "\"}";
}

}  // namespace balfib::search
