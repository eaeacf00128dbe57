#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "balfib/approx_real.hpp"
#include "balfib/precision.hpp"

namespace balfib::numerics {

// A real number that can be re-enclosed at any requested precision. Wraps a
// generator `bits -> enclosure`; evaluations are memoized (keeping the
// tightest one seen) and shared across copies, so escalation inside one
// consumer benefits the others. When the value is exactly rational, exact()
// is set and integer-distance computations can bypass intervals entirely.
class RefinableReal {
 public:
  using Generator = std::function<ApproxReal(mpfr_prec_t)>;

  RefinableReal() : RefinableReal(mpq_class(0)) {}

  explicit RefinableReal(Generator gen, std::string label = "")
      : gen_(std::move(gen)),
        label_(std::move(label)),
        memo_(std::make_shared<Memo>()) {}

  explicit RefinableReal(mpq_class q, std::string label = "")
      : exact_(std::move(q)),
        label_(std::move(label)),
        memo_(std::make_shared<Memo>()) {
    mpq_class captured = *exact_;
    gen_ = [captured](mpfr_prec_t bits) {
      return ApproxReal::from_rational(captured, bits);
    };
  }

  ApproxReal eval(mpfr_prec_t bits) const {
    std::lock_guard<std::mutex> lock(memo_->m);
    if (memo_->best && memo_->best_bits >= bits) return *memo_->best;
    ApproxReal v = gen_(bits);
    memo_->best = v;
    memo_->best_bits = bits;
    return v;
  }

  const std::optional<mpq_class>& exact() const { return exact_; }
  const std::string& label() const { return label_; }

 private:
  struct Memo {
    std::mutex m;
    std::optional<ApproxReal> best;
    mpfr_prec_t best_bits = 0;
  };

  Generator gen_;
  std::optional<mpq_class> exact_;
  std::string label_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace balfib::numerics
