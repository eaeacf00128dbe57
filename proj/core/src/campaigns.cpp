#include "balfib/campaigns.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "balfib/constants.hpp"
#include "balfib/sequences.hpp"

namespace balfib::reduction {

using linforms::TheoremTag;
using numerics::add;
using numerics::add_int;
using numerics::div;
using numerics::log_of;
using numerics::mul;
using numerics::mul_2exp;
using numerics::mul_int;
using numerics::neg;
using numerics::pow_ui;
using numerics::sub;

double upper_double(const ApproxReal& x) {
  return mpfr_get_d(x.hi(), MPFR_RNDU);
}

const KBasis::Parts& KBasis::at(mpfr_prec_t bits) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = memo_.lower_bound(bits);
  if (it != memo_.end()) return it->second;
  numerics::PrecisionContext local(ctx_.clamp(bits), ctx_.max_bits,
                                   ctx_.escalation_factor);
  ApproxReal phi = numerics::dominant_root(k_, local);
  ApproxReal f = numerics::f_k_at_root(k_, phi);
  Parts parts{phi,
              f,
              log_of(phi),
              log_of(f),
              numerics::log_gamma_const(local.working_bits),
              numerics::log2_const(local.working_bits)};
  auto [pos, ok] = memo_.emplace(bits, std::move(parts));
  (void)ok;
  return pos->second;
}

RefinableReal phi_refinable(KBasisPtr basis) {
  return RefinableReal(
      [basis](mpfr_prec_t bits) { return basis->at(bits).phi; },
      "phi(" + std::to_string(basis->k()) + ")");
}

RefinableReal tau_gamma_phi(KBasisPtr basis) {
  return RefinableReal(
      [basis](mpfr_prec_t bits) {
        const auto& p = basis->at(bits);
        return div(p.log_gamma, p.log_phi);
      },
      "log_gamma/log_phi(" + std::to_string(basis->k()) + ")");
}

RefinableReal mu_stage1(TheoremTag tag, KBasisPtr basis) {
  bool bal = tag == TheoremTag::balancing;
  return RefinableReal(
      [basis, bal](mpfr_prec_t bits) {
        const auto& p = basis->at(bits);
        // log(f^-2 / (4 sqrt2)) = -2 log f - (5/2) log 2, resp. -... - log 2
        ApproxReal log_div = bal ? mul(ApproxReal::from_rational(
                                           mpq_class(5, 2), p.log2.prec()),
                                       p.log2)
                                 : p.log2;
        ApproxReal num = sub(neg(mul_2exp(p.log_f, 1)), log_div);
        return add_int(div(num, p.log_phi), mpz_class(2));
      },
      "mu1");
}

RefinableReal mu_stage2(TheoremTag tag, KBasisPtr basis,
                        const mpz_class& f_m) {
  bool bal = tag == TheoremTag::balancing;
  return RefinableReal(
      [basis, bal, f_m](mpfr_prec_t bits) {
        const auto& p = basis->at(bits);
        ApproxReal log_div = bal ? mul(ApproxReal::from_rational(
                                           mpq_class(5, 2), p.log2.prec()),
                                       p.log2)
                                 : p.log2;
        ApproxReal log_fm =
            log_of(ApproxReal::from_integer(f_m, p.log_phi.prec()));
        ApproxReal num = sub(sub(neg(p.log_f), log_div), log_fm);
        return add_int(div(num, p.log_phi), mpz_class(1));
      },
      "mu2");
}

namespace {

InstanceRecord make_record(int k, std::optional<long> m,
                           const ReductionOutcome& out) {
  InstanceRecord rec;
  rec.k = k;
  rec.m = m;
  rec.q_index = out.q_index;
  rec.q_digits10 = mpz_sizeinbase(out.q_used.get_mpz_t(), 10);
  rec.epsilon = out.epsilon.midpoint_string(8);
  rec.bound = upper_double(out.log_bound);
  rec.w_bound = out.w_bound;
  return rec;
}

struct PerK {
  std::optional<InstanceRecord> stage1;
  std::vector<InstanceRecord> stage2;
  std::vector<std::string> failures;
};

PerK run_small_k(TheoremTag tag, int k, const CampaignOptions& opt) {
  PerK result;
  const auto& ctx = opt.ctx;
  mpz_class m_k = linforms::derive_n_bound(tag, k, ctx);
  auto basis = std::make_shared<KBasis>(k, ctx);
  RefinableReal tau = tau_gamma_phi(basis);
  RefinableReal phi = phi_refinable(basis);
  ContinuedFraction cf(tau, ctx);

  bool bal = tag == TheoremTag::balancing;
  ReductionInstance inst1{tau, mu_stage1(tag, basis),
                          numerics::parse_decimal(bal ? "17.2" : "49.23"),
                          phi, m_k};
  ReductionOutcome out1 = dujella_petho_reduce_boosted(inst1, cf, ctx);
  if (out1.status != ReductionStatus::Reduced) {
    result.failures.push_back("stage1 epsilon failed at k=" +
                              std::to_string(k));
    return result;
  }
  result.stage1 = make_record(k, std::nullopt, out1);
  // Stage 1 covers m >= 5, so the residual range below stays in play.
  long m_max_k = std::max(out1.w_bound + 1, 4l);

  sequences::KFibTable table(k);
  mpq_class a2 = numerics::parse_decimal(bal ? "21.45" : "12.26");
  for (long m = 1; m <= m_max_k; ++m) {
    ReductionInstance inst2{tau, mu_stage2(tag, basis, table.at(m)), a2, phi,
                            m_k};
    ReductionOutcome out2 = dujella_petho_reduce_boosted(inst2, cf, ctx);
    if (out2.status != ReductionStatus::Reduced) {
      result.failures.push_back("stage2 epsilon failed at k=" +
                                std::to_string(k) + " m=" +
                                std::to_string(m));
      continue;
    }
    result.stage2.push_back(make_record(k, m, out2));
  }
  return result;
}

CampaignReport run_small_campaign(TheoremTag tag, std::string name,
                                  const CampaignOptions& opt) {
  bool bal = tag == TheoremTag::balancing;
  int lo = opt.k_lo > 0 ? opt.k_lo : (bal ? 3 : 2);
  int hi = opt.k_hi > 0 ? opt.k_hi : (bal ? 450 : 500);
  if (lo < (bal ? 3 : 2) || hi < lo)
    throw ConfigError("campaign k-range outside theorem bounds");

  std::vector<int> ks;
  if (opt.smoke) {
    for (int k : {bal ? 3 : 2, 50, bal ? 450 : 500})
      if (k >= lo && k <= hi) ks.push_back(k);
  } else {
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
  }

  std::vector<PerK> slots(ks.size());
  int jobs = std::max(1, opt.jobs);
  auto worker = [&](int wid) {
    for (size_t i = static_cast<size_t>(wid); i < ks.size();
         i += static_cast<size_t>(jobs))
      slots[i] = run_small_k(tag, ks[i], opt);
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  CampaignReport rep;
  rep.name = std::move(name);
  rep.tag = tag;
  for (auto& s : slots) {
    if (s.stage1) {
      if (s.stage1->bound > rep.stage1_max_bound) {
        rep.stage1_max_bound = s.stage1->bound;
        rep.stage1_argmax_k = s.stage1->k;
      }
      rep.m_max = std::max(rep.m_max, s.stage1->w_bound + 1);
      rep.stage1.push_back(*s.stage1);
    }
    for (auto& r : s.stage2) {
      if (r.bound > rep.stage2_max_bound) {
        rep.stage2_max_bound = r.bound;
        rep.stage2_argmax_k = r.k;
        rep.stage2_argmax_m = r.m.value_or(0);
      }
      rep.n_max = std::max(rep.n_max, r.w_bound + 1);
      rep.stage2.push_back(std::move(r));
    }
    for (auto& f : s.failures) rep.failures.push_back(std::move(f));
  }
  rep.m_max = std::max(rep.m_max, 4l);
  rep.n_max = std::max(rep.n_max, 2l);
  long m_ceiling = bal ? 443 : 554;
  long n_ceiling = bal ? 409 : 568;
  rep.ok = rep.failures.empty() && rep.m_max <= m_ceiling &&
           rep.n_max <= n_ceiling;
  return rep;
}

// n-bound < 2^{k/2} gate, squared to stay in exact integers.
bool growth_gate(TheoremTag tag, int k,
                 const numerics::PrecisionContext& ctx) {
  mpz_class m = linforms::derive_n_bound(tag, k, ctx);
  mpz_class lhs = m * m;
  mpz_class rhs = mpz_class(1) << static_cast<unsigned long>(k);
  return lhs < rhs;
}

}  // namespace

CampaignReport campaign_thm1_small_k(const CampaignOptions& opt) {
  return run_small_campaign(TheoremTag::balancing, "thm1-small-k", opt);
}

CampaignReport campaign_thm2_small_k(const CampaignOptions& opt) {
  return run_small_campaign(TheoremTag::lucas, "thm2-small-k", opt);
}

LargeKReport campaign_thm1_large_k(const numerics::PrecisionContext& ctx) {
  LargeKReport rep;
  rep.name = "thm1-large-k";
  rep.tag = TheoremTag::balancing;

  auto chain = linforms::large_k_initial_chain(TheoremTag::balancing, ctx);
  rep.chain_dominated = chain.dominated;
  // The n < 2^{k/2} gate holds from the cutoff onward (the gap widens in
  // k); check the boundary and two sentinels past it.
  rep.growth_gate_certified = growth_gate(TheoremTag::balancing, 451, ctx) &&
                              growth_gate(TheoremTag::balancing, 1181, ctx) &&
                              growth_gate(TheoremTag::balancing, 2400, ctx);

  RefinableReal tau = numerics::ref_log_gamma_over_log2();
  RefinableReal mu(mpq_class(-1, 2), "-1/2");
  RefinableReal two(mpq_class(2), "2");
  mpq_class a = numerics::parse_decimal("5.92");
  ContinuedFraction cf(tau, ctx);

  mpz_class m1(numerics::parse_decimal("9.72e173").get_num());
  ReductionOutcome r1 = dujella_petho_reduce(
      ReductionInstance{tau, mu, a, two, m1}, cf, ctx);
  if (r1.status != ReductionStatus::Reduced) {
    rep.failures.push_back("pass-1 reduction failed");
    return rep;
  }
  rep.q_index_1 = r1.q_index;
  rep.q_digits10_1 = mpz_sizeinbase(r1.q_used.get_mpz_t(), 10);
  rep.bound1 = upper_double(r1.log_bound);
  rep.k_pass1 = 2 * (r1.w_bound + 1);

  mpz_class n_mid = linforms::derive_n_bound(
      TheoremTag::balancing, static_cast<int>(rep.k_pass1), ctx);
  mpz_class n_ceiling(numerics::parse_decimal("3.4e60").get_num());
  rep.n_mid_bound = ApproxReal::from_integer(n_mid, 64).midpoint_string(6);
  rep.n_mid_dominated = n_mid <= n_ceiling;

  mpz_class m2 = 2 * n_ceiling;  // 6.8e60
  ReductionOutcome r2 = dujella_petho_reduce(
      ReductionInstance{tau, mu, a, two, m2}, cf, ctx);
  if (r2.status != ReductionStatus::Reduced) {
    rep.failures.push_back("pass-2 reduction failed");
    return rep;
  }
  rep.q_index_2 = r2.q_index;
  rep.bound2 = upper_double(r2.log_bound);
  rep.k_pass2 = 2 * (r2.w_bound + 1);

  rep.ok = rep.chain_dominated && rep.growth_gate_certified &&
           rep.n_mid_dominated && rep.k_pass2 < 450 &&
           rep.failures.empty();
  return rep;
}

LargeKReport campaign_thm2_large_k(const numerics::PrecisionContext& ctx) {
  LargeKReport rep;
  rep.name = "thm2-large-k";
  rep.tag = TheoremTag::lucas;

  auto chain = linforms::large_k_initial_chain(TheoremTag::lucas, ctx);
  rep.chain_dominated = chain.dominated;
  rep.growth_gate_certified = growth_gate(TheoremTag::lucas, 501, ctx) &&
                              growth_gate(TheoremTag::lucas, 1083, ctx) &&
                              growth_gate(TheoremTag::lucas, 2400, ctx);

  RefinableReal tau = numerics::ref_log2_over_log_gamma();
  ContinuedFraction cf(tau, ctx);
  mpfr_prec_t bits = std::max<mpfr_prec_t>(ctx.working_bits, 256);
  mpq_class c233 = numerics::parse_decimal("2.33");

  // gamma^l 2^-(m+n-3) has mu identically zero, so the reduction lemma is
  // inapplicable; the Legendre-type convergent bound closes it instead.
  auto pass = [&](const mpz_class& m_cap, mpz_class& a_max_out,
                  size_t& idx_out, double& bound_out) {
    LegendreBound lb = legendre_bound(cf, m_cap);
    a_max_out = lb.a_max;
    idx_out = lb.n_index;
    // 2^{k/2} < 2.33 (a_max + 2) M
    mpq_class v = c233 * mpq_class(lb.a_max + 2) * mpq_class(m_cap);
    ApproxReal log2v = div(log_of(ApproxReal::from_rational(v, bits)),
                           numerics::log2_const(bits));
    bound_out = upper_double(log2v);
    mpz_class cl;
    mpfr_get_z(cl.get_mpz_t(), log2v.hi(), MPFR_RNDU);
    return 2 * cl.get_si();
  };

  mpz_class m1(numerics::parse_decimal("3.94e158").get_num());
  rep.k_pass1 = pass(m1, rep.a_max_1, rep.legendre_index_1, rep.bound1);

  mpz_class n_mid = linforms::derive_n_bound(
      TheoremTag::lucas, static_cast<int>(rep.k_pass1), ctx);
  mpz_class n_ceiling(numerics::parse_decimal("1.1e61").get_num());
  rep.n_mid_bound = ApproxReal::from_integer(n_mid, 64).midpoint_string(6);
  rep.n_mid_dominated = n_mid <= n_ceiling;

  mpz_class m2 = 2 * n_ceiling;  // 2.2e61
  rep.k_pass2 = pass(m2, rep.a_max_2, rep.legendre_index_2, rep.bound2);

  rep.ok = rep.chain_dominated && rep.growth_gate_certified &&
           rep.n_mid_dominated && rep.k_pass2 < 500 &&
           rep.failures.empty();
  return rep;
}

void write_campaign_jsonl(const CampaignReport& rep,
                          const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write campaign report: " + path);
  auto emit = [&](const InstanceRecord& r) {
    out << "{\"k\":" << r.k;
    if (r.m) out << ",\"m\":" << *r.m;
    out << ",\"q_index\":" << r.q_index
        << ",\"q_digits10\":" << r.q_digits10 << ",\"epsilon\":\""
        << r.epsilon << "\",\"bound\":" << r.bound << "}\n";
  };
  for (const auto& r : rep.stage1) emit(r);
  for (const auto& r : rep.stage2) emit(r);
}

}  // namespace balfib::reduction
