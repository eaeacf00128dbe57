#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "balfib/linforms.hpp"
#include "balfib/reduction.hpp"
#include "balfib/roots.hpp"

namespace balfib::reduction {

// Shared per-k constants (phi, f, and their logs), lazily refined and
// memoized per precision so the hundreds of stage-2 instances of one k all
// reuse the same evaluations.
class KBasis {
 public:
  struct Parts {
    ApproxReal phi, f, log_phi, log_f, log_gamma, log2;
  };

  KBasis(int k, numerics::PrecisionContext ctx) : k_(k), ctx_(ctx) {}

  const Parts& at(mpfr_prec_t bits);
  int k() const { return k_; }
  const numerics::PrecisionContext& ctx() const { return ctx_; }

 private:
  int k_;
  numerics::PrecisionContext ctx_;
  std::mutex mutex_;
  std::map<mpfr_prec_t, Parts> memo_;
};
using KBasisPtr = std::shared_ptr<KBasis>;

RefinableReal phi_refinable(KBasisPtr basis);
RefinableReal tau_gamma_phi(KBasisPtr basis);  // log gamma / log phi
// mu of the first reduction: 2 + log(f^-2 / (4 sqrt 2)) / log phi for the
// balancing equation, 2 + log(f^-2 / 2) / log phi for the Lucas one.
RefinableReal mu_stage1(linforms::TheoremTag tag, KBasisPtr basis);
// mu of the second: 1 + log(f^-1 / ((4 sqrt 2 | 2) F_m)) / log phi.
RefinableReal mu_stage2(linforms::TheoremTag tag, KBasisPtr basis,
                        const mpz_class& f_m);

struct CampaignOptions {
  int k_lo = 0;  // 0 = full theorem range
  int k_hi = 0;
  int jobs = 1;
  bool smoke = false;  // restrict k to the smoke probes within range
  std::optional<std::string> cache_path;  // phi cache file
  numerics::PrecisionContext ctx{};
};

struct InstanceRecord {
  int k = 0;
  std::optional<long> m;
  size_t q_index = 0;
  size_t q_digits10 = 0;
  std::string epsilon;
  double bound = 0;  // upper end of log(Aq/eps)/log B
  long w_bound = 0;
};

struct CampaignReport {
  std::string name;
  linforms::TheoremTag tag = linforms::TheoremTag::balancing;
  std::vector<InstanceRecord> stage1;
  std::vector<InstanceRecord> stage2;
  std::vector<std::string> failures;
  double stage1_max_bound = 0;
  double stage2_max_bound = 0;
  int stage1_argmax_k = 0;
  int stage2_argmax_k = 0;
  long stage2_argmax_m = 0;
  long m_max = 0;  // global bound on m from stage 1
  long n_max = 0;  // global bound on n from stage 2
  bool ok = false;
};

// Small-k campaigns: Dujella-Petho over every k in range (theorem ranges
// [3,450] resp. [2,500]), stage 2 over m up to each k's own stage-1 bound.
CampaignReport campaign_thm1_small_k(const CampaignOptions& opt);
CampaignReport campaign_thm2_small_k(const CampaignOptions& opt);

struct LargeKReport {
  std::string name;
  linforms::TheoremTag tag = linforms::TheoremTag::balancing;
  bool chain_dominated = false;
  bool growth_gate_certified = false;  // n-bound < 2^{k/2} past the cutoff
  size_t q_index_1 = 0;
  size_t q_digits10_1 = 0;
  double bound1 = 0;
  long k_pass1 = 0;
  mpz_class a_max_1;  // Legendre route only
  size_t legendre_index_1 = 0;
  std::string n_mid_bound;  // recomputed n ceiling after pass 1
  bool n_mid_dominated = false;
  size_t q_index_2 = 0;
  double bound2 = 0;
  long k_pass2 = 0;
  mpz_class a_max_2;
  size_t legendre_index_2 = 0;
  bool ok = false;
  std::vector<std::string> failures;
};

LargeKReport campaign_thm1_large_k(const numerics::PrecisionContext& ctx);
LargeKReport campaign_thm2_large_k(const numerics::PrecisionContext& ctx);

// One line per instance: {"k":..,"m":..,"q_index":..,"q_digits10":..,
// "epsilon":"..","bound":..}; stage-1 lines omit m.
void write_campaign_jsonl(const CampaignReport& rep, const std::string& path);

double upper_double(const ApproxReal& x);

}  // namespace balfib::reduction
