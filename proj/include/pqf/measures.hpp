#pragma once

#include <limits>
#include <variant>

#include "fourier.hpp"

namespace pqf {

/// The A_q example: prod_{m < n} (1 + q e^{-2 pi i 2^m t}) / 4 for t = k/2^n.
struct AqBase {
  u64 q = 5;
  bool operator==(const AqBase&) const = default;
};

/// The indicator 1_0.
struct DiracBase {
  bool operator==(const DiracBase&) const = default;
};

using BaseHat = std::variant<ExactDual, AqBase, DiracBase>;

struct MeasureTerm {
  CycloNum coeff;
  PHat shift;
  BaseHat base;
};

/// A Fourier-Stieltjes transform given symbolically as
/// t -> sum_i coeff_i * base_i(t - shift_i).
struct MeasureHat {
  u64 p = 2;
  std::vector<MeasureTerm> terms;
};

inline MeasureHat measure_table(const ExactDual& F) {
  return MeasureHat{F.prime(), {{CycloNum::one(F.prime()), PHat::zero(F.prime()), F}}};
}

inline MeasureHat measure_aq(u64 q) {
  if (!is_prime(q) || q == 2) throw config_error("A_q needs an odd prime q");
  return MeasureHat{2, {{CycloNum::one(2), PHat::zero(2), AqBase{q}}}};
}

inline MeasureHat measure_dirac(u64 p) { return MeasureHat{p, {{CycloNum::one(p), PHat::zero(p), DiracBase{}}}}; }

inline MeasureHat measure_add(MeasureHat a, const MeasureHat& b) {
  if (a.p != b.p) throw config_error("measure_add: mismatched primes");
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

inline MeasureHat measure_scale(MeasureHat a, const CycloNum& c) {
  for (auto& t : a.terms) t.coeff = c * t.coeff;
  return a;
}

/// mu^ - c 1_0.
inline MeasureHat measure_minus_dirac(MeasureHat a, const CycloNum& c) {
  a.terms.push_back({-c, PHat::zero(a.p), DiracBase{}});
  return a;
}

/// tau_s mu^(t) = mu^(t + s).
inline MeasureHat measure_translate(MeasureHat a, const PHat& s) {
  for (auto& t : a.terms) t.shift = t.shift - s;
  return a;
}

/// A_q^(t) as an exact cyclotomic number.
inline CycloNum aq_hat(u64 q, const PHat& t) {
  if (t.prime() != 2) throw config_error("aq_hat: p must be 2");
  CycloNum v = CycloNum::one(2);
  const mpq_class qq(static_cast<unsigned long>(q));
  PHat u = t;
  while (!u.is_zero()) {
    // (1 + q zeta^{-u}) / 4
    CycloNum rot = v.mul_root(u.denom_exp(), -static_cast<std::int64_t>(u.num()));
    v = (v + rot.scaled(qq)).scaled(mpq_class(1, 4));
    u = u.scaled(2);
  }
  return v;
}

/// A_q^ on the whole ball |t|_2 <= 2^N, indexed as enumerate_ball(2, N).
/// Uses A_q^(t) = (1 + q zeta^{-t}) / 4 * A_q^(2t).
inline std::vector<CycloNum> aq_ball_values(u64 q, unsigned N) {
  const u64 pn = ipow(2, N);
  std::vector<CycloNum> vals(pn, CycloNum::zero(2));
  vals[0] = CycloNum::one(2);
  const mpq_class qq(static_cast<unsigned long>(q));
  for (unsigned n = 1; n <= N; ++n) {
    const u64 stride = ipow(2, N - n);
    const u64 pk = ipow(2, n);
    for (u64 k = 1; k < pk; k += 2) {
      const CycloNum& prev = vals[(2 * k % pk) * stride];
      CycloNum rot = prev.mul_root(n, -static_cast<std::int64_t>(k));
      vals[k * stride] = (prev + rot.scaled(qq)).scaled(mpq_class(1, 4));
    }
  }
  return vals;
}

namespace detail {

inline CycloNum base_eval(const BaseHat& b, const PHat& u) {
  if (const auto* F = std::get_if<ExactDual>(&b)) return F->at(u);
  if (const auto* A = std::get_if<AqBase>(&b)) return aq_hat(A->q, u);
  return u.is_zero() ? CycloNum::one(u.prime()) : CycloNum::zero(u.prime());
}

inline unsigned max_shift_exp(const MeasureHat& mu) {
  unsigned m = 0;
  for (const auto& t : mu.terms) m = std::max(m, t.shift.denom_exp());
  return m;
}

}  // namespace detail

inline CycloNum measure_eval(const MeasureHat& mu, const PHat& t) {
  CycloNum s = CycloNum::zero(mu.p);
  for (const auto& term : mu.terms) {
    if (term.coeff.is_zero()) continue;
    s = s + term.coeff * detail::base_eval(term.base, t - term.shift);
  }
  return s;
}

/// mu^ on enumerate_ball(p, N), sharing one A_q table per distinct q.
inline std::vector<CycloNum> measure_ball_values(const MeasureHat& mu, unsigned N) {
  const u64 p = mu.p;
  const unsigned L = std::max(N, detail::max_shift_exp(mu));
  const u64 pn = ipow(p, N);
  std::vector<CycloNum> out(pn, CycloNum::zero(p));
  std::map<u64, std::vector<CycloNum>> aq_tables;
  for (const auto& term : mu.terms) {
    if (term.coeff.is_zero()) continue;
    const std::vector<CycloNum>* table = nullptr;
    if (const auto* A = std::get_if<AqBase>(&term.base)) {
      auto it = aq_tables.find(A->q);
      if (it == aq_tables.end()) it = aq_tables.emplace(A->q, aq_ball_values(A->q, L)).first;
      table = &it->second;
    }
    for (u64 k = 0; k < pn; ++k) {
      PHat u = PHat::make_unsigned(p, k, N) - term.shift;
      CycloNum b = table ? (*table)[u.num_at_level(L)] : detail::base_eval(term.base, u);
      if (!b.is_zero()) out[k] = out[k] + term.coeff * b;
    }
  }
  return out;
}

/// mu~_N(z) = sum_{|t|_p <= p^N} mu^(t) e^{2 pi i {t z}_p}, as the literal ball sum.
inline CycloNum mu_tilde(const MeasureHat& mu, const ZpPoint& z, unsigned N) {
  const std::vector<CycloNum> vals = measure_ball_values(mu, N);
  const u64 pn = ipow(mu.p, N);
  const u64 zr = truncate_point(z, N);
  unsigned L = N;
  for (const auto& v : vals) L = std::max(L, v.conductor());
  detail::RootSum<CycloNum> sum(mu.p, L);
  for (u64 k = 0; k < pn; ++k) sum.add(vals[k], N, static_cast<std::int64_t>(static_cast<u128>(k) * zr % pn));
  return sum.result();
}

/// q^{#1([z]_{2^N})} / 2^N - (q-3)/4 sum_{n<N} q^{#1([z]_{2^n})} / 2^n.
inline mpq_class aq_partial_closed(u64 q, const ZpPoint& z, unsigned N) {
  if (z.prime() != 2) throw config_error("aq_partial_closed: p must be 2");
  mpq_class sum = 0;
  for (unsigned n = 0; n < N; ++n) {
    auto c = static_cast<unsigned>(z.count_digit_in_prefix(1, n));
    sum += mpq_class(mpz_pow(q, c), mpz_pow(2, n));
  }
  auto cN = static_cast<unsigned>(z.count_digit_in_prefix(1, N));
  mpq_class head(mpz_pow(q, cN), mpz_pow(2, N));
  mpq_class r = head - mpq_class(mpz_class(static_cast<long>(q) - 3), 4) * sum;
  r.canonicalize();
  return r;
}

/// The pointwise limit of the A_q partial sums, tagged by the topology in
/// which it is taken: archimedean on N_0, q-adic elsewhere. The value is
/// exact in both cases.
struct AqTilde {
  enum class Topology { archimedean, qadic };
  Topology topology = Topology::archimedean;
  mpq_class value;

  QAdicNum to_qadic(const FieldCtxPtr& ctx) const {
    if (topology != Topology::qadic) throw error("aq_tilde: archimedean limit has no q-adic meaning");
    return QAdicNum::from_rational(ctx, value);
  }

  std::string topology_name() const { return topology == Topology::qadic ? "qadic" : "archimedean"; }
};

inline AqTilde aq_tilde(u64 q, const ZpPoint& z) {
  if (z.prime() != 2) throw config_error("aq_tilde: p must be 2");
  const mpq_class factor(mpz_class(static_cast<long>(q) - 3), 4);
  const auto& pre = z.preperiod();
  if (z.is_nat()) {
    const auto lambda = static_cast<unsigned>(pre.size());
    mpq_class sum = 0;
    for (unsigned n = 0; n < lambda; ++n)
      sum += mpq_class(mpz_pow(q, static_cast<unsigned>(z.count_digit_in_prefix(1, n))), mpz_pow(2, n));
    auto w = static_cast<unsigned>(z.count_digit_in_prefix(1, lambda));
    mpq_class r = -2 * factor * mpq_class(mpz_pow(q, w), mpz_pow(2, lambda)) - factor * sum;
    r.canonicalize();
    return {AqTilde::Topology::archimedean, r};
  }
  // sum_{n >= 0} q^{c_n} / 2^n with c_n the number of ones among the first n
  // digits: a finite head plus one period times a geometric series.
  const auto P = static_cast<unsigned>(pre.size());
  const auto& per = z.period();
  const auto L = static_cast<unsigned>(per.size());
  mpq_class head = 0;
  for (unsigned n = 0; n < P; ++n)
    head += mpq_class(mpz_pow(q, static_cast<unsigned>(z.count_digit_in_prefix(1, n))), mpz_pow(2, n));
  const auto cP = static_cast<unsigned>(z.count_digit_in_prefix(1, P));
  mpq_class block = 0;
  unsigned ones = 0;
  for (unsigned r = 0; r < L; ++r) {
    block += mpq_class(mpz_pow(q, cP + ones), mpz_pow(2, P + r));
    ones += per[r];
  }
  mpq_class ratio(mpz_pow(q, ones), mpz_pow(2, L));
  ratio.canonicalize();
  mpq_class total = head + block / (1 - ratio);
  mpq_class r = -factor * total;
  r.canonicalize();
  return {AqTilde::Topology::qadic, r};
}

/// mu~_N(z) evaluated term by term: for N at least every shift's
/// denominator exponent the ball is shift-invariant, so each term contributes
/// coeff * e^{2 pi i {shift z}} * (partial sum of its base). A_q bases use
/// aq_partial_closed; smaller N fall back to the literal sum.
inline CycloNum mu_tilde_fast(const MeasureHat& mu, const ZpPoint& z, unsigned N) {
  if (N < detail::max_shift_exp(mu)) return mu_tilde(mu, z, N);
  CycloNum s = CycloNum::zero(mu.p);
  for (const auto& term : mu.terms) {
    if (term.coeff.is_zero()) continue;
    CycloNum base = CycloNum::zero(mu.p);
    if (const auto* F = std::get_if<ExactDual>(&term.base)) {
      for (const auto& [t, v] : F->support)
        if (t.in_ball(N)) base = base + v * character(t, z);
    } else if (const auto* A = std::get_if<AqBase>(&term.base)) {
      base = CycloNum::rational(2, aq_partial_closed(A->q, z, N));
    } else {
      base = CycloNum::one(mu.p);
    }
    s = s + term.coeff * character(term.shift, z) * base;
  }
  return s;
}

/// A transform given as a pointwise product of measure transforms (the
/// transform of a convolution of measures).
struct MeasureProduct {
  std::vector<MeasureHat> factors;
};

inline MeasureProduct conv_measures(const MeasureHat& mu, const MeasureHat& nu) { return {{mu, nu}}; }

inline MeasureProduct conv_measures(MeasureProduct mu, const MeasureHat& nu) {
  mu.factors.push_back(nu);
  return mu;
}

inline CycloNum measure_eval(const MeasureProduct& m, const PHat& t) {
  CycloNum s = CycloNum::one(t.prime());
  for (const auto& f : m.factors) {
    s = s * measure_eval(f, t);
    if (s.is_zero()) break;
  }
  return s;
}

/// int f dmu = sum_t f^(-t) mu^(t).
template <class M>
CycloNum integrate_against(const ExactFn& f, const M& mu) {
  ExactDual F = fourier_fwd(f);
  CycloNum s = CycloNum::zero(f.prime());
  for (const auto& [t, v] : F.support) s = s + v * measure_eval(mu, -t);
  return s;
}

/// q-adic valuation of each increment mu~_{N+1}(z) - mu~_N(z), N < N_max,
/// and an observational verdict.
struct CauchyReport {
  std::vector<std::optional<int>> increment_valuations;  // nullopt: exact zero
  bool cauchy_observed = false;

  std::string verdict() const {
    return cauchy_observed ? "q-adically Cauchy (observed)" : "not Cauchy (observed)";
  }
};

namespace detail {

/// Valuations over the final half of the range are non-decreasing and end
/// strictly higher than they start; exact zeros count as infinite.
inline bool final_half_growing(const std::vector<std::optional<int>>& v) {
  if (v.empty()) return false;
  constexpr int inf = std::numeric_limits<int>::max();
  auto val = [&](std::size_t i) { return v[i] ? *v[i] : inf; };
  const std::size_t start = v.size() / 2;
  for (std::size_t i = start + 1; i < v.size(); ++i)
    if (val(i) < val(i - 1)) return false;
  return val(v.size() - 1) == inf || val(v.size() - 1) > val(start);
}

}  // namespace detail

inline CauchyReport cauchy_report(const MeasureHat& mu, const ZpPoint& z, unsigned N_max, const FieldCtxPtr& ctx) {
  CauchyReport r;
  CycloNum prev = mu_tilde_fast(mu, z, 0);
  for (unsigned N = 0; N < N_max; ++N) {
    CycloNum next = mu_tilde_fast(mu, z, N + 1);
    r.increment_valuations.push_back(exact_valuation(next - prev, ctx));
    prev = std::move(next);
  }
  r.cauchy_observed = detail::final_half_growing(r.increment_valuations);
  return r;
}

/// A certified limit of mu~_N(z0). `exact` limits come from finite sums and
/// hold in every topology.
struct MeasureLimit {
  enum class Topology { exact, qadic, archimedean };
  Topology topology = Topology::exact;
  CycloNum value;

  bool certified_qadic_zero() const { return topology != Topology::archimedean && value.is_zero(); }

  std::string topology_name() const {
    switch (topology) {
      case Topology::qadic:
        return "qadic";
      case Topology::archimedean:
        return "archimedean";
      default:
        return "exact";
    }
  }
};

/// The limit of mu~_N(z0) from closed forms, when every term has one:
/// tables stabilize, 1_0 gives 1, and A_q gives aq_tilde.
inline MeasureLimit certified_limit(const MeasureHat& mu, const ZpPoint& z0) {
  MeasureLimit out{MeasureLimit::Topology::exact, CycloNum::zero(mu.p)};
  bool qadic = false, arch = false;
  for (const auto& term : mu.terms) {
    CycloNum base = CycloNum::zero(mu.p);
    if (const auto* F = std::get_if<ExactDual>(&term.base)) {
      for (const auto& [t, v] : F->support) base = base + v * character(t, z0);
    } else if (const auto* A = std::get_if<AqBase>(&term.base)) {
      AqTilde a = aq_tilde(A->q, z0);
      (a.topology == AqTilde::Topology::qadic ? qadic : arch) = true;
      base = CycloNum::rational(2, a.value);
    } else {
      base = CycloNum::one(mu.p);
    }
    out.value = out.value + term.coeff * character(term.shift, z0) * base;
  }
  if (qadic && arch) throw error("certified_limit: terms converge in different topologies");
  if (qadic) out.topology = MeasureLimit::Topology::qadic;
  if (arch) out.topology = MeasureLimit::Topology::archimedean;
  return out;
}

/// sup_{|t|_p <= p^n} |mu^(t)|_q.
inline QNorm norm_dual_window(const MeasureHat& mu, unsigned n, const FieldCtxPtr& ctx) {
  QNorm m{ctx->q, std::nullopt};
  for (const auto& v : measure_ball_values(mu, n)) m = QNorm::max(m, qnorm(v, ctx));
  return m;
}

}  // namespace pqf
