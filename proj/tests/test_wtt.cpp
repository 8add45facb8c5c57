#include <gtest/gtest.h>

#include <numeric>

#include "pqf/sampling.hpp"
#include "pqf/wtt.hpp"

using namespace pqf;

namespace {

CycloNum q_(u64 p, long a, long b = 1) { return CycloNum::rational(p, mpq_class(a, b)); }

ExactFn fn_of(u64 p, unsigned level, std::vector<long> vals) {
  ExactFn f{p, level, {}};
  for (long v : vals) f.values.push_back(q_(p, v));
  return f;
}

// Determinant by cofactor expansion along the first row.
CycloNum det(const std::vector<std::vector<CycloNum>>& a) {
  const std::size_t n = a.size();
  const u64 p = a[0][0].prime();
  if (n == 1) return a[0][0];
  CycloNum s = CycloNum::zero(p);
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j].is_zero()) continue;
    std::vector<std::vector<CycloNum>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<CycloNum> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(std::move(row));
    }
    CycloNum term = a[0][j] * det(minor);
    s = j % 2 ? s - term : s + term;
  }
  return s;
}

const MeasureHat& aq5() {
  static const MeasureHat mu = measure_aq(5);
  return mu;
}

const MeasureHat& aq5_zeroed() {
  static const MeasureHat mu = measure_minus_dirac(measure_aq(5), q_(2, 1, 3));
  return mu;
}

CycloNum nonzero_cyclo(sampling::Rng& rng, u64 p, unsigned max_cond) {
  CycloNum v = CycloNum::zero(p);
  while (v.is_zero()) v = sampling::small_cyclo(rng, p, max_cond);
  return v;
}

FieldCtxPtr ctx25(unsigned N) { return field_setup(Config::make(2, 5, 64, std::max(1u, N)), N); }

}  // namespace

TEST(WttContinuous, Examples) {
  auto one = wtt_continuous_check(constant_fn<CycloNum>(2, CycloNum::one(2), 2));
  EXPECT_TRUE(one.zero_set.empty());
  EXPECT_TRUE(one.circulant_rank_full);
  ASSERT_TRUE(one.inverse_transform.has_value());
  EXPECT_TRUE(dual_equal(*one.inverse_transform, delta0<CycloNum>(2)));

  auto r = wtt_continuous_check(fn_of(2, 1, {1, 0}));
  EXPECT_EQ(r.zero_set, std::vector<u64>{1});
  EXPECT_EQ(r.circulant_rank, 1u);
  EXPECT_FALSE(r.circulant_rank_full);
  EXPECT_FALSE(r.inverse_transform.has_value());
  EXPECT_TRUE(r.consistent());

  auto s = wtt_continuous_check(fn_of(2, 1, {1, 2}));
  EXPECT_TRUE(s.zero_set.empty());
  ASSERT_TRUE(s.inverse_transform.has_value());
  ExactFn recip{2, 1, {q_(2, 1), q_(2, 1, 2)}};
  EXPECT_TRUE(dual_equal(*s.inverse_transform, fourier_fwd(recip)));
  EXPECT_TRUE(s.inverse_verified);
}

TEST(ConvInverse, Examples) {
  EXPECT_TRUE(dual_equal(conv_inverse_dual(delta0<CycloNum>(3)), delta0<CycloNum>(3)));
  ExactDual ind = fourier_fwd(indicator_fn<CycloNum>(2, 1, 0));
  try {
    conv_inverse_dual(ind);
    FAIL() << "expected not_invertible";
  } catch (const not_invertible& e) {
    EXPECT_EQ(e.zeros(), std::vector<u64>{1});
  }
  ExactDual c = fourier_fwd(constant_fn<CycloNum>(3, q_(3, -2, 7), 1));
  EXPECT_TRUE(dual_equal(conv_inverse_dual(c), dirac_dual<CycloNum>(3, PHat::zero(3), q_(3, -7, 2))));
}

TEST(TranslateMatrix, RankMatchesDeterminant) {
  sampling::Rng rng(11);
  for (u64 p : {2, 3}) {
    for (int i = 0; i < 20; ++i) {
      const unsigned level = p == 2 ? 2 : 1;
      ExactFn f = sampling::random_fn(rng, p, level, 1);
      for (auto& v : f.values)
        if (sampling::uniform(rng, 0, 2) == 0) v = CycloNum::zero(p);
      auto a = translate_matrix(fourier_fwd(f), level);
      const bool full = exact_rank(a) == a.size();
      EXPECT_EQ(full, !det(a).is_zero());
      EXPECT_EQ(exact_rank(a), f.values.size() - zero_set(f).size());
    }
  }
}

TEST(WttContinuous, ExhaustiveZeroPatterns) {
  sampling::Rng rng(19);
  for (auto [p, level] : std::vector<std::pair<u64, unsigned>>{{2, 1}, {2, 2}, {3, 1}}) {
    const u64 n = ipow(p, level);
    for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
      ExactFn chi{p, level, {}};
      for (u64 k = 0; k < n; ++k) chi.values.push_back((mask >> k) & 1 ? nonzero_cyclo(rng, p, level) : CycloNum::zero(p));
      auto r = wtt_continuous_check(chi);
      EXPECT_TRUE(r.consistent()) << p << " " << level << " " << mask;
      EXPECT_EQ(r.zero_set.empty(), mask == (u64{1} << n) - 1);
      if (r.inverse_transform) {
        EXPECT_TRUE(dual_equal(conv_dual(fourier_fwd(chi), *r.inverse_transform), delta0<CycloNum>(p)));
      }
    }
  }
}

TEST(LemmaEstimates, Examples) {
  auto ctx = field_setup(Config::make(3, 7, 64, 2), 2);
  sampling::Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    ExactDual f = sampling::random_dual(rng, 3, 7, 2, 4, 1, -2, 2);
    ExactDual g = sampling::random_dual(rng, 3, 7, 1, 3, 1, -2, 2);
    auto r = lemma_estimates_check(delta0<CycloNum>(3), f, g, 1, 0, ctx);
    EXPECT_TRUE(r.first);
    EXPECT_TRUE(r.second);
    EXPECT_EQ(r.lhs1, norm_dual_window(f, 1, ctx));
  }
}

TEST(LemmaEstimates, DiracMassesAndTables) {
  sampling::Rng rng(3);
  for (auto [p, q] : std::vector<std::pair<u64, u64>>{{2, 5}, {3, 5}, {2, 7}}) {
    auto ctx = field_setup(Config::make(p, q, 64, 3), 3);
    for (int i = 0; i < 20; ++i) {
      auto M = static_cast<unsigned>(sampling::uniform(rng, 0, 2));
      auto N = static_cast<unsigned>(sampling::uniform(rng, 0, 2));
      const std::size_t size = i < 10 ? 1 : 4;
      ExactDual phi = sampling::random_dual(rng, p, q, N, size, 1, -2, 2);
      ExactDual f = sampling::random_dual(rng, p, q, 3, size, 1, -2, 2);
      ExactDual g = sampling::random_dual(rng, p, q, M, size, 1, -2, 2);
      auto r = lemma_estimates_check(phi, f, g, M, N, ctx);
      EXPECT_TRUE(r.first && r.second) << p << " " << q << " " << i;
    }
  }
}

TEST(LemmaEstimates, RejectsSupportOutsideBall) {
  auto ctx = ctx25(2);
  ExactDual wide = dirac_dual<CycloNum>(2, PHat::parse(2, "1/4"), CycloNum::one(2));
  EXPECT_THROW(lemma_estimates_check(wide, wide, delta0<CycloNum>(2), 2, 1, ctx), hypothesis_violated);
  EXPECT_THROW(lemma_estimates_check(delta0<CycloNum>(2), wide, wide, 1, 2, ctx), hypothesis_violated);
}

TEST(PhiN, Examples) {
  EXPECT_TRUE(dual_equal(build_phi_N(2, ZpPoint::integer(2, 5), 0), delta0<CycloNum>(2)));
  ExactDual ones = build_phi_N(3, ZpPoint::integer(3, 0), 2);
  EXPECT_EQ(ones.support.size(), 9u);
  for (const auto& [t, v] : ones.support) EXPECT_EQ(v, CycloNum::one(3));
  ExactDual phi = build_phi_N(2, ZpPoint::integer(2, -1), 1);
  ExactDual expect{2, {}};
  expect.add_to(PHat::zero(2), CycloNum::one(2));
  expect.add_to(PHat::parse(2, "1/2"), q_(2, -1));
  EXPECT_TRUE(dual_equal(phi, expect));
}

TEST(PhiN, WindowNormsAreOne) {
  for (u64 p : {2, 3}) {
    auto ctx = field_setup(Config::make(p, 5, 32, 4), 4);
    for (auto z0 : {ZpPoint::integer(p, 0), ZpPoint::integer(p, -1), ZpPoint::integer(p, 7), ZpPoint::parse(p, "1:01")}) {
      for (unsigned N = 0; N <= (p == 2 ? 4u : 3u); ++N) {
        ExactDual phi = build_phi_N(p, z0, N);
        EXPECT_EQ(phi.support.size(), ipow(p, N));
        for (unsigned M = 0; M <= 4; ++M) EXPECT_EQ(norm_dual_window(phi, M, ctx).value(), 1);
      }
    }
  }
}

TEST(PhiConvIdentity, Examples) {
  auto m1 = ZpPoint::integer(2, -1);
  EXPECT_TRUE(phi_conv_identity_check(aq5(), m1, PHat::parse(2, "1/2"), 3));
  EXPECT_TRUE(phi_conv_identity_check(aq5(), m1, PHat::zero(2), 2));
  auto dirac = measure_dirac(3);
  auto z = ZpPoint::integer(3, 5);
  for (const auto& tau : enumerate_ball(3, 2)) {
    EXPECT_TRUE(phi_conv_identity_check(dirac, z, tau, 2));
    EXPECT_EQ(conv_eval(build_phi_N(3, z, 2), dirac, tau), character(-tau, z));
  }
  EXPECT_THROW(phi_conv_identity_check(aq5(), m1, PHat::parse(2, "1/8"), 2), hypothesis_violated);
}

TEST(PhiConvIdentity, RandomInstances) {
  sampling::Rng rng(41);
  for (const auto* mu : {&aq5(), &aq5_zeroed()}) {
    for (int i = 0; i < 15; ++i) {
      auto tau = sampling::random_phat(rng, 2, 3);
      auto N = static_cast<unsigned>(sampling::uniform(rng, tau.denom_exp(), 5));
      auto z0 = ZpPoint::integer(2, sampling::uniform(rng, -30, 30));
      EXPECT_TRUE(phi_conv_identity_check(*mu, z0, tau, N)) << tau.to_string() << " " << N;
    }
  }
}

TEST(Truncate, Examples) {
  EXPECT_TRUE(dual_equal(truncate_dual(delta0<CycloNum>(2), 0), delta0<CycloNum>(2)));
  ExactDual eta = dirac_dual<CycloNum>(2, PHat::parse(2, "3/8"), q_(2, 4));
  EXPECT_EQ(m0_bound(eta), 3u);
  EXPECT_TRUE(truncate_dual(eta, 2).support.empty());
  EXPECT_TRUE(dual_equal(truncate_dual(eta, 3), eta));
}

TEST(Truncate, ConvolutionUnchangedFromM0) {
  sampling::Rng rng(43);
  for (int i = 0; i < 10; ++i) {
    ExactDual eta = sampling::random_dual(rng, 2, 5, 3, 4, 1, 0, 1);
    const unsigned m0 = m0_bound(eta);
    EXPECT_TRUE(dual_equal(truncate_dual(eta, m0), eta));
    if (m0 > 0) {
      EXPECT_FALSE(dual_equal(truncate_dual(eta, m0 - 1), eta));
    }
    const auto full = conv_ball_values(eta, aq5(), 4);
    for (unsigned M = m0; M <= 4; ++M) EXPECT_EQ(conv_ball_values(truncate_dual(eta, M), aq5(), 4), full);
  }
}

TEST(ConvBallValues, MatchesPointwiseEvaluation) {
  sampling::Rng rng(47);
  for (int i = 0; i < 10; ++i) {
    ExactDual eta = sampling::random_dual(rng, 2, 5, 3, 4, 2, -1, 1);
    eta.add_to(sampling::random_phat(rng, 2, 3), CycloNum::root(2, 2, sampling::uniform(rng, 0, 3)));
    const auto vals = conv_ball_values(eta, aq5_zeroed(), 3);
    const auto ball = enumerate_ball(2, 3);
    for (const auto& t : ball) EXPECT_EQ(vals[t.num_at_level(3)], conv_eval(eta, aq5_zeroed(), t));
  }
}

TEST(RootExponent, RecognizesRoots) {
  for (u64 p : {2, 3, 5}) {
    for (unsigned n = 0; n <= 2; ++n) {
      for (u64 j = 0; j < ipow(p, n); ++j) {
        CycloNum r = CycloNum::root(p, n, static_cast<std::int64_t>(j));
        auto e = r.root_exponent();
        ASSERT_TRUE(e.has_value()) << p << " " << n << " " << j;
        EXPECT_EQ(CycloNum::root(p, e->first, static_cast<std::int64_t>(e->second)), r);
      }
    }
    EXPECT_FALSE(q_(p, 2).root_exponent().has_value());
  }
  EXPECT_FALSE(CycloNum::root(3, 1, 1).scaled(2).root_exponent().has_value());
}

TEST(ClaimThree, WindowsDecayWithLevel) {
  auto ctx = ctx25(6);
  auto m1 = ZpPoint::integer(2, -1);
  for (unsigned N = 0; N <= 6; ++N) {
    const auto vals = conv_ball_values(build_phi_N(2, m1, N), aq5_zeroed(), N);
    for (unsigned m = 0; m <= N; ++m) {
      QNorm w{5, std::nullopt};
      for (u64 k = 0; k < ipow(2, m); ++k) w = QNorm::max(w, qnorm(vals[k * ipow(2, N - m)], ctx));
      EXPECT_LE(w, (QNorm{5, static_cast<int>(N)})) << "N=" << N << " m=" << m;
    }
  }
}

TEST(Nondensity, SingleTermCombo) {
  auto ctx = ctx25(8);
  auto w = nondensity_witness(aq5_zeroed(), ZpPoint::integer(2, -1), {{CycloNum::one(2), PHat::zero(2)}}, ctx);
  EXPECT_TRUE(w.limit.certified_qadic_zero());
  EXPECT_EQ(w.f_at_z0, CycloNum::one(2));
  EXPECT_EQ(w.N_star, 1u);
  EXPECT_EQ(w.windowed_max.value(), 1);
  EXPECT_TRUE(w.verdict);
}

TEST(Nondensity, RandomCombos) {
  auto ctx = ctx25(8);
  sampling::Rng rng(53);
  for (int i = 0; i < 8; ++i) {
    std::vector<std::pair<CycloNum, PHat>> combo;
    for (int k = 0; k < 3; ++k)
      combo.emplace_back(sampling::spread_cyclo(rng, 2, 5, 2, 0, 0), sampling::random_phat(rng, 2, 3));
    auto w = nondensity_witness(aq5_zeroed(), ZpPoint::integer(2, -1), combo, ctx);
    EXPECT_TRUE(w.verdict) << i;
    EXPECT_GE(w.N_star, w.m0);
  }
}

TEST(Nondensity, DiracHasNoCertifiedZero) {
  auto ctx = field_setup(Config::make(3, 5, 32, 1), 1);
  EXPECT_THROW(nondensity_witness(measure_dirac(3), ZpPoint::integer(3, 4), {{CycloNum::one(3), PHat::zero(3)}}, ctx),
               precondition_unverified);
}

TEST(AttainmentScan, Examples) {
  auto ctx = ctx25(1);
  std::vector<ZpPoint> cands{ZpPoint::integer(2, 0), ZpPoint::integer(2, 1), ZpPoint::integer(2, -1),
                             ZpPoint::parse(2, ":01")};
  auto r = value_attainment_scan(aq5(), q_(2, 1, 3), cands, 10, ctx);
  ASSERT_EQ(r.attaining.size(), 1u);
  EXPECT_EQ(r.attaining[0], ZpPoint::integer(2, -1));
  EXPECT_TRUE(r.entries[2].supports_nondensity);
  EXPECT_TRUE(r.entries[2].cauchy.cauchy_observed);
  EXPECT_NE(r.conclusion.find("not dense"), std::string::npos);

  auto none = value_attainment_scan(aq5(), q_(2, 2), cands, 10, ctx);
  EXPECT_TRUE(none.attaining.empty());
  EXPECT_NE(none.conclusion.find("no conclusion"), std::string::npos);

  auto d = value_attainment_scan(measure_dirac(2), CycloNum::one(2), cands, 6, ctx);
  EXPECT_EQ(d.attaining.size(), cands.size());
}
