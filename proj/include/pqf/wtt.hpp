#pragma once

#include <utility>

#include "measures.hpp"

namespace pqf {

/// Rank of a square matrix over Q(zeta) by exact Gaussian elimination.
inline std::size_t exact_rank(std::vector<std::vector<CycloNum>> a) {
  const std::size_t n = a.size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t piv = rank;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[rank]);
    const CycloNum inv = a[rank][col].inv();
    for (std::size_t r = rank + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      const CycloNum factor = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c)
        if (!a[rank][c].is_zero()) a[r][c] = a[r][c] - factor * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

/// The p^N x p^N translate matrix A[s][t] = F(t - s) over enumerate_ball(N).
inline std::vector<std::vector<CycloNum>> translate_matrix(const ExactDual& F, unsigned N) {
  const auto ball = enumerate_ball(F.prime(), N);
  std::vector<std::vector<CycloNum>> a(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    a[i].reserve(ball.size());
    for (const auto& t : ball) a[i].push_back(F.at(t - ball[i]));
  }
  return a;
}

class not_invertible : public error {
 public:
  not_invertible(const std::string& what, std::vector<u64> zeros) : error(what), zeros_(std::move(zeros)) {}
  const std::vector<u64>& zeros() const { return zeros_; }

 private:
  std::vector<u64> zeros_;
};

/// Residues n mod p^level where f vanishes.
inline std::vector<u64> zero_set(const ExactFn& f) {
  std::vector<u64> z;
  for (u64 n = 0; n < f.values.size(); ++n)
    if (f.values[n].is_zero()) z.push_back(n);
  return z;
}

/// The transform of 1/chi where chi = fourier_inv(F); verified to be a
/// convolution inverse of F.
inline ExactDual conv_inverse_dual(const ExactDual& F) {
  ExactFn chi = fourier_inv(F);
  std::vector<u64> zeros = zero_set(chi);
  if (!zeros.empty()) {
    std::string msg = "not invertible: chi vanishes at residue";
    msg += zeros.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < zeros.size(); ++i) msg += (i ? ", " : "") + std::to_string(zeros[i]);
    msg += " mod " + std::to_string(chi.values.size());
    throw not_invertible(msg, std::move(zeros));
  }
  ExactFn recip = chi;
  for (auto& v : recip.values) v = v.inv();
  ExactDual G = fourier_fwd(recip);
  if (!dual_equal(conv_dual(F, G), delta0<CycloNum>(F.prime()))) throw error("conv_inverse_dual: inverse check failed");
  return G;
}

/// Finite-level shadow of the continuous Tauberian equivalences for a
/// locally constant chi of level N.
struct WttContinuousReport {
  unsigned level = 0;
  std::vector<u64> zero_set;
  std::vector<CycloNum> dft_values;
  std::size_t circulant_rank = 0;
  bool circulant_rank_full = false;
  std::optional<ExactDual> inverse_transform;
  bool inverse_verified = false;
  std::string scope =
      "finite-level projection: translates of chi^ restricted to the ball |t|_p <= p^N; "
      "density in the full space is not decided";

  bool consistent() const {
    return zero_set.empty() == circulant_rank_full && circulant_rank_full == inverse_transform.has_value();
  }
};

inline WttContinuousReport wtt_continuous_check(const ExactFn& chi) {
  WttContinuousReport r;
  r.level = chi.level;
  r.zero_set = zero_set(chi);
  r.dft_values = chi.values;
  ExactDual F = fourier_fwd(chi);
  r.circulant_rank = exact_rank(translate_matrix(F, chi.level));
  r.circulant_rank_full = r.circulant_rank == chi.values.size();
  try {
    r.inverse_transform = conv_inverse_dual(F);
    r.inverse_verified = true;
  } catch (const not_invertible&) {
  }
  return r;
}

/// Restriction to the ball |t|_p <= p^M.
inline ExactDual truncate_dual(const ExactDual& eta, unsigned M) {
  ExactDual r{eta.ctx, {}};
  for (const auto& [t, v] : eta.support)
    if (t.in_ball(M)) r.support.emplace(t, v);
  return r;
}

/// The least M with truncate_dual(eta, M) = eta.
inline unsigned m0_bound(const ExactDual& eta) { return eta.max_denom_exp(); }

/// (eta * mu^)(t) = sum_s eta(s) mu^(t - s).
inline CycloNum conv_eval(const ExactDual& eta, const MeasureHat& mu, const PHat& t) {
  CycloNum s = CycloNum::zero(mu.p);
  for (const auto& [u, v] : eta.support) s = s + v * measure_eval(mu, t - u);
  return s;
}

/// (eta * mu^) on enumerate_ball(N). Entries of eta that are roots of unity
/// are applied as rotations.
inline std::vector<CycloNum> conv_ball_values(const ExactDual& eta, const MeasureHat& mu, unsigned N) {
  const unsigned L = std::max(N, eta.max_denom_exp());
  const std::vector<CycloNum> mu_vals = measure_ball_values(mu, L);
  unsigned level = 0;
  for (const auto& m : mu_vals) level = std::max(level, m.conductor());
  for (const auto& [u, v] : eta.support)
    if (auto r = v.root_exponent()) level = std::max(level, r->first);
  std::vector<std::pair<PHat, std::optional<u64>>> entries;
  for (const auto& [u, v] : eta.support) {
    std::optional<u64> j;
    if (auto r = v.root_exponent()) j = r->second * ipow(mu.p, level - r->first);
    entries.emplace_back(u, j);
  }
  const u64 pn = ipow(mu.p, N);
  std::vector<CycloNum> out;
  out.reserve(pn);
  for (u64 k = 0; k < pn; ++k) {
    const PHat t = PHat::make_unsigned(mu.p, k, N);
    CycloAccumulator acc(mu.p, level);
    CycloNum rest = CycloNum::zero(mu.p);
    for (const auto& [u, j] : entries) {
      const CycloNum& m = mu_vals[(t - u).num_at_level(L)];
      if (m.is_zero()) continue;
      if (j)
        acc.add(m, *j);
      else
        rest = rest + eta.support.at(u) * m;
    }
    out.push_back(acc.result() + rest);
  }
  return out;
}

struct LemmaCheck {
  bool first = false;   // |phi * f|_{p^M} <= |phi|_sup |f|_{p^max(M,N)}
  bool second = false;  // |phi * f * g|_{p^M} <= |phi * f|_{p^max(M,N)} |g|_sup
  QNorm lhs1, rhs1, lhs2, rhs2;
};

/// Both convolution estimates for phi supported in the ball of radius p^N and
/// g in the ball of radius p^M.
inline LemmaCheck lemma_estimates_check(const ExactDual& phi, const ExactDual& f, const ExactDual& g, unsigned M,
                                        unsigned N, const FieldCtxPtr& ctx) {
  if (phi.max_denom_exp() > N) throw hypothesis_violated("hypothesis violated: support of phi exceeds declared ball");
  if (g.max_denom_exp() > M) throw hypothesis_violated("hypothesis violated: support of g exceeds declared ball");
  const unsigned K = std::max(M, N);
  LemmaCheck r;
  ExactDual pf = conv_dual(phi, f);
  r.lhs1 = norm_dual_window(pf, M, ctx);
  r.rhs1 = norm_dual_sup(phi, ctx) * norm_dual_window(f, K, ctx);
  r.lhs2 = norm_dual_window(conv_dual(pf, g), M, ctx);
  r.rhs2 = norm_dual_window(pf, K, ctx) * norm_dual_sup(g, ctx);
  r.first = r.lhs1 <= r.rhs1;
  r.second = r.lhs2 <= r.rhs2;
  return r;
}

/// phi_N(t) = 1_0(p^N t) e^{-2 pi i {t z0}_p}.
inline ExactDual build_phi_N(u64 p, const ZpPoint& z0, unsigned N) {
  ExactDual phi{p, {}};
  for (const auto& t : enumerate_ball(p, N)) phi.set(t, character(-t, z0));
  return phi;
}

/// (mu^ * phi_N)(tau) = e^{-2 pi i {tau z0}_p} mu~_N(z0), both sides exact.
inline bool phi_conv_identity_check(const MeasureHat& mu, const ZpPoint& z0, const PHat& tau, unsigned N) {
  if (!tau.in_ball(N)) throw hypothesis_violated("hypothesis violated: N < -v_p(tau)");
  ExactDual phi = build_phi_N(mu.p, z0, N);
  CycloNum lhs = conv_eval(phi, mu, tau);
  CycloNum rhs = character(-tau, z0) * mu_tilde(mu, z0, N);
  return lhs == rhs;
}

/// Certificate that the translates of mu^ do not approximate 1_0: the window
/// norm of 1_0 - sum_m c_m mu^(t - t_m) over |t|_p <= p^{N*} is at least 1.
struct NondensityWitness {
  ZpPoint z0;
  std::vector<std::pair<CycloNum, PHat>> combo;
  MeasureLimit limit;
  CycloNum f_at_z0;
  unsigned m0 = 0;
  unsigned N_star = 0;
  std::optional<int> anchor_valuation;  // v_q(f(z0) mu~_{N*}(z0)); nullopt: exact zero
  QNorm windowed_max;
  bool verdict = false;
};

inline NondensityWitness nondensity_witness(const MeasureHat& mu, const ZpPoint& z0,
                                            const std::vector<std::pair<CycloNum, PHat>>& combo,
                                            const FieldCtxPtr& ctx, unsigned max_level = 64) {
  NondensityWitness w;
  w.z0 = z0;
  w.combo = combo;
  w.limit = certified_limit(mu, z0);
  if (!w.limit.certified_qadic_zero())
    throw precondition_unverified("precondition unverified: mu~(z0) limit not certified zero (limit " +
                                  w.limit.value.to_string() + ", " + w.limit.topology_name() + ")");
  w.f_at_z0 = CycloNum::zero(mu.p);
  for (const auto& [c, t] : combo) {
    w.f_at_z0 = w.f_at_z0 + c * character(t, z0);
    w.m0 = std::max(w.m0, t.denom_exp());
  }
  unsigned N = w.m0;
  for (;; ++N) {
    if (N > max_level) throw precision_exhausted("nondensity_witness: no level up to " + std::to_string(max_level) + " makes f(z0) mu~_N(z0) small");
    w.anchor_valuation = exact_valuation(w.f_at_z0 * mu_tilde_fast(mu, z0, N), ctx);
    if (!w.anchor_valuation || *w.anchor_valuation >= 1) break;
  }
  w.N_star = N;
  ExactDual eta{mu.p, {}};
  for (const auto& [c, t] : combo) eta.add_to(t, c);
  std::vector<CycloNum> vals = conv_ball_values(eta, mu, N);
  vals[0] = CycloNum::one(mu.p) - vals[0];
  for (std::size_t k = 1; k < vals.size(); ++k) vals[k] = -vals[k];
  w.windowed_max = QNorm{ctx->q, std::nullopt};
  for (const auto& v : vals) w.windowed_max = QNorm::max(w.windowed_max, qnorm(v, ctx));
  w.verdict = w.windowed_max >= QNorm{ctx->q, 0};
  return w;
}

struct AttainmentEntry {
  ZpPoint z;
  CauchyReport cauchy;
  std::optional<MeasureLimit> limit;  // closed-form limit of mu~_N(z), when available
  bool attained = false;
  bool supports_nondensity = false;   // attained with a limit valid q-adically
};

struct AttainmentReport {
  CycloNum c;
  std::vector<AttainmentEntry> entries;
  std::vector<ZpPoint> attaining;
  std::string conclusion;
};

/// For each candidate z, observes convergence of (mu - c 1_0)~_N(z) and, where
/// a closed form exists, decides exactly whether the limit of mu~_N(z) is c.
inline AttainmentReport value_attainment_scan(const MeasureHat& mu, const CycloNum& c,
                                              const std::vector<ZpPoint>& candidates, unsigned N_max,
                                              const FieldCtxPtr& ctx) {
  AttainmentReport r;
  r.c = c;
  const MeasureHat shifted = measure_minus_dirac(mu, c);
  for (const auto& z : candidates) {
    AttainmentEntry e;
    e.z = z;
    e.cauchy = cauchy_report(shifted, z, N_max, ctx);
    try {
      e.limit = certified_limit(mu, z);
    } catch (const error&) {
    }
    if (e.limit) {
      e.attained = e.limit->value == c;
      e.supports_nondensity = e.attained && e.limit->topology != MeasureLimit::Topology::archimedean;
    }
    if (e.attained) r.attaining.push_back(z);
    r.entries.push_back(std::move(e));
  }
  bool any = false;
  for (const auto& e : r.entries) any = any || e.supports_nondensity;
  r.conclusion = any ? "translates of mu^ - c 1_0 are not dense"
                     : "no conclusion: no q-adic attainment among the candidates (a scan is not a density proof)";
  return r;
}

}  // namespace pqf
