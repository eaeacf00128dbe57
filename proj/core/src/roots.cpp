#include "balfib/roots.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace balfib::numerics {

namespace {

struct Scratch {
  mpfr_t v;
  explicit Scratch(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

// 2(1 - 2^-k) as an exact rational.
mpq_class lower_bracket(int k) {
  mpz_class den = mpz_class(1) << k;
  mpz_class num = (mpz_class(1) << (k + 1)) - 2;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// Point Newton iteration on g(x) = x^{k+1} - 2x^k + 1 from x0 = 2 - 2^-k.
// Plain rounded arithmetic; certification happens afterwards.
void newton_point(int k, mpfr_prec_t prec, mpfr_ptr out) {
  Scratch x(prec), t(prec), g(prec), dg(prec), step(prec);
  mpfr_set_ui(x.v, 1, MPFR_RNDN);
  mpfr_div_2ui(x.v, x.v, k, MPFR_RNDN);
  mpfr_ui_sub(x.v, 2, x.v, MPFR_RNDN);  // 2 - 2^-k
  for (int it = 0; it < 200; ++it) {
    mpfr_pow_ui(t.v, x.v, k, MPFR_RNDN);  // x^k
    mpfr_sub_ui(g.v, x.v, 2, MPFR_RNDN);
    mpfr_mul(g.v, g.v, t.v, MPFR_RNDN);
    mpfr_add_ui(g.v, g.v, 1, MPFR_RNDN);  // x^k (x-2) + 1
    // g'(x) = x^{k-1} ((k+1) x - 2k)
    mpfr_div(dg.v, t.v, x.v, MPFR_RNDN);  // x^{k-1}
    mpfr_mul_ui(step.v, x.v, k + 1, MPFR_RNDN);
    mpfr_sub_ui(step.v, step.v, 2ul * k, MPFR_RNDN);
    mpfr_mul(dg.v, dg.v, step.v, MPFR_RNDN);
    mpfr_div(step.v, g.v, dg.v, MPFR_RNDN);
    mpfr_sub(x.v, x.v, step.v, MPFR_RNDN);
    if (mpfr_zero_p(step.v) ||
        mpfr_get_exp(step.v) < mpfr_get_exp(x.v) - prec + 4)
      break;
  }
  mpfr_set(out, x.v, MPFR_RNDN);
}

// Sign of g at an exact point, certified via a zero-width interval.
int certified_sign_of_g(int k, mpfr_srcptr x, mpfr_prec_t prec) {
  ApproxReal pt = ApproxReal::from_endpoints(x, x, prec);
  ApproxReal g = telescoped_char_poly(k, pt);
  if (g.is_certainly_positive()) return 1;
  if (g.is_certainly_negative()) return -1;
  return 0;
}

}  // namespace

ApproxReal telescoped_char_poly(int k, const ApproxReal& x) {
  ApproxReal xk = pow_ui(x, static_cast<unsigned long>(k));
  ApproxReal shifted = add_int(x, mpz_class(-2));
  return add_int(mul(xk, shifted), mpz_class(1));
}

ApproxReal psi_value(int k, const ApproxReal& x) {
  ApproxReal g = telescoped_char_poly(k, x);
  ApproxReal xm1 = add_int(x, mpz_class(-1));
  return div(g, xm1);
}

bool validate_root_enclosure(int k, const ApproxReal& phi, mpfr_prec_t bits) {
  if (!phi.certainly_greater_than(lower_bracket(k))) return false;
  if (!phi.certainly_less_than(mpz_class(2))) return false;
  ApproxReal psi = psi_value(k, phi);
  return psi.abs_below_2exp(-static_cast<long>(bits) + 10);
}

ApproxReal dominant_root(int k, const PrecisionContext& ctx) {
  if (k < 2) throw PreconditionError("dominant_root needs k >= 2");
  for (mpfr_prec_t bits = ctx.working_bits;; bits = ctx.next(bits)) {
    // The residual target 2^(-bits+10) divides by Psi' ~ 2^k near the root,
    // so the point iteration runs k + margin bits above the certified level.
    mpfr_prec_t eff = bits + k + 64;
    Scratch x(eff), lo(eff), hi(eff), r(eff);
    newton_point(k, eff, x.v);

    // Bracket the root between x-r and x+r; widen r until the sign change
    // is certified, then shrink no further (the enclosure is tight enough).
    bool bracketed = false;
    mpfr_set_ui_2exp(r.v, 1, mpfr_get_exp(x.v) - eff + 16, MPFR_RNDU);
    for (int widen = 0; widen < 8; ++widen) {
      mpfr_sub(lo.v, x.v, r.v, MPFR_RNDD);
      mpfr_add(hi.v, x.v, r.v, MPFR_RNDU);
      if (certified_sign_of_g(k, lo.v, eff) < 0 &&
          certified_sign_of_g(k, hi.v, eff) > 0) {
        bracketed = true;
        break;
      }
      mpfr_mul_2ui(r.v, r.v, 4, MPFR_RNDU);
    }
    if (!bracketed) continue;

    ApproxReal phi = ApproxReal::from_endpoints(lo.v, hi.v, eff);
    if (validate_root_enclosure(k, phi, bits)) return phi;
  }
}

ApproxReal f_k_at_root(int k, const ApproxReal& phi) {
  ApproxReal num = add_int(phi, mpz_class(-1));
  ApproxReal den = add_int(mul_int(add_int(phi, mpz_class(-2)), k + 1),
                           mpz_class(2));
  if (!den.is_certainly_positive())
    throw DomainError("f_k denominator not certified positive");
  ApproxReal f = div(num, den);
  if (f.certainly_less_than(mpq_class(1, 2)) ||
      f.certainly_greater_than(mpq_class(3, 4)))
    throw InvariantViolation("f_k(phi) certified outside (1/2, 3/4)");
  return f;
}

bool f_range_certified(const ApproxReal& f) {
  return f.certainly_greater_than(mpq_class(1, 2)) &&
         f.certainly_less_than(mpq_class(3, 4));
}

RefinableReal ref_dominant_root(int k, const PrecisionContext& ctx) {
  PrecisionContext base = ctx;
  return RefinableReal(
      [k, base](mpfr_prec_t bits) {
        PrecisionContext local(base.clamp(bits), base.max_bits,
                               base.escalation_factor);
        return dominant_root(k, local);
      },
      "phi(" + std::to_string(k) + ")");
}

PhiProvider::PhiProvider(PrecisionContext ctx,
                         std::optional<std::string> cache_path)
    : ctx_(ctx), path_(std::move(cache_path)) {
  if (path_) load();
}

void PhiProvider::load() {
  std::ifstream in(*path_);
  if (!in) return;  // nothing cached yet
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag, mid, err;
    int k = 0;
    long bits = 0;
    if (!(ls >> tag >> k >> bits >> mid >> err) || tag != "phi")
      throw CacheInvalid("malformed cache line: " + line);
    ApproxReal phi = ApproxReal::from_midpoint_err(mid, err, bits + k + 64);
    if (!validate_root_enclosure(k, phi, bits))
      throw CacheInvalid("cache entry failed root residual: k=" +
                         std::to_string(k));
    cache_.insert_or_assign(k, Entry{bits, std::move(phi)});
  }
}

ApproxReal PhiProvider::get(int k, mpfr_prec_t min_bits) {
  min_bits = ctx_.clamp(min_bits);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end() && it->second.bits >= min_bits)
      return it->second.phi;
  }
  PrecisionContext local(min_bits, ctx_.max_bits, ctx_.escalation_factor);
  ApproxReal phi = dominant_root(k, local);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.insert_or_assign(k, Entry{min_bits, phi});
    dirty_ = true;
  }
  return phi;
}

void PhiProvider::flush() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!path_ || !dirty_) return;
  std::string tmp = *path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write cache file: " + tmp);
    for (const auto& [k, e] : cache_) {
      size_t digits = static_cast<size_t>(e.phi.prec() * 0.302) + 4;
      out << "phi " << k << ' ' << e.bits << ' '
          << e.phi.midpoint_string(digits) << ' ' << e.phi.err_string()
          << '\n';
    }
  }
  std::filesystem::rename(tmp, *path_);
  dirty_ = false;
}

size_t PhiProvider::entries() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

}  // namespace balfib::numerics
