#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "balfib/approx_real.hpp"
#include "balfib/precision.hpp"
#include "balfib/refinable.hpp"

namespace balfib::numerics {

// x^{k+1} - 2 x^k + 1 over an interval; this telescoped form equals
// (x - 1) * Psi_k(x) and costs O(log k) interval multiplications.
ApproxReal telescoped_char_poly(int k, const ApproxReal& x);

// Psi_k(x) = x^k - x^{k-1} - ... - 1, evaluated as the telescoped form
// divided by (x - 1). Only valid away from x = 1.
ApproxReal psi_value(int k, const ApproxReal& x);

// Certified enclosure of the dominant root phi(k) of Psi_k. Guarantees
// 2(1 - 2^-k) < phi < 2 and |Psi_k(phi)| < 2^(-working_bits+10), both
// certified; escalates internally, PrecisionExhausted past ctx.max_bits.
ApproxReal dominant_root(int k, const PrecisionContext& ctx);

// f_k(phi) = (phi - 1) / (2 + (k+1)(phi - 2)). Interval evaluation; throws
// InvariantViolation if the certified interval exits (1/2, 3/4), and
// PrecisionExhausted (via escalate_hint=true result check by callers) when
// the input enclosure is too wide to certify the range.
ApproxReal f_k_at_root(int k, const ApproxReal& phi);

// True when the enclosure is certified strictly inside (1/2, 3/4).
bool f_range_certified(const ApproxReal& f);

RefinableReal ref_dominant_root(int k, const PrecisionContext& ctx);

// Validates a candidate enclosure the same way dominant_root certifies its
// result: bracketing plus root residual at `bits` working bits.
bool validate_root_enclosure(int k, const ApproxReal& phi, mpfr_prec_t bits);

// Disk-backed store of dominant roots. One line per entry:
//   phi <k> <bits> <decimal-midpoint> <decimal-err>
// Loading re-validates every entry against the root residual and throws
// CacheInvalid on any mismatch. Writes go through a temp file + rename.
class PhiProvider {
 public:
  explicit PhiProvider(PrecisionContext ctx,
                       std::optional<std::string> cache_path = std::nullopt);

  // Enclosure certified for at least `min_bits` working bits.
  ApproxReal get(int k, mpfr_prec_t min_bits);

  void flush();
  size_t entries() const;

 private:
  struct Entry {
    mpfr_prec_t bits;
    ApproxReal phi;
  };

  void load();

  PrecisionContext ctx_;
  std::optional<std::string> path_;
  mutable std::mutex mutex_;
  std::map<int, Entry> cache_;
  bool dirty_ = false;
};

}  // namespace balfib::numerics
