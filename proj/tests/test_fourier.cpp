#include <gtest/gtest.h>

#include "pqf/fourier.hpp"
#include "pqf/sampling.hpp"

using namespace pqf;

namespace {

CycloNum q_(u64 p, long a, long b = 1) { return CycloNum::rational(p, mpq_class(a, b)); }

ExactDual dual_of(u64 p, std::initializer_list<std::pair<const char*, CycloNum>> entries) {
  ExactDual F{p, {}};
  for (const auto& [t, v] : entries) F.add_to(PHat::parse(p, t), v);
  return F;
}

// Direct Riemann sum (1/p^N) sum_n f(n) zeta^{-nk}, one root at a time.
ExactDual naive_fwd(const ExactFn& f) {
  const u64 p = f.prime(), pn = ipow(p, f.level);
  ExactDual F{p, {}};
  for (u64 k = 0; k < pn; ++k) {
    CycloNum s = CycloNum::zero(p);
    for (u64 n = 0; n < pn; ++n) s = s + f.values[n] * CycloNum::root(p, f.level, -static_cast<std::int64_t>(n * k % pn));
    F.add_to(PHat::make_unsigned(p, k, f.level), s.scaled(mpq_class(1, pn)));
  }
  return F;
}

ExactFn naive_conv(const ExactFn& f, const ExactFn& g) {
  const unsigned N = std::max(f.level, g.level);
  const u64 pn = ipow(f.prime(), N);
  ExactFn h{f.prime(), N, {}};
  for (u64 m = 0; m < pn; ++m) {
    CycloNum s = CycloNum::zero(f.prime());
    for (u64 n = 0; n < pn; ++n) s = s + f.at((m + pn - n) % pn) * g.at(n);
    h.values.push_back(s.scaled(mpq_class(1, pn)));
  }
  return h;
}

ExactDual naive_conv_dual(const ExactDual& F, const ExactDual& G) {
  ExactDual H{F.prime(), {}};
  for (const auto& [s, a] : F.support)
    for (const auto& [u, b] : G.support) H.add_to(s + u, a * b);
  return H;
}

}  // namespace

TEST(Character, Examples) {
  EXPECT_EQ(character(PHat::zero(2), ZpPoint::integer(2, 7)), CycloNum::one(2));
  EXPECT_EQ(character(PHat::parse(2, "1/2"), ZpPoint::integer(2, 1)), q_(2, -1));
  EXPECT_EQ(character(PHat::parse(2, "1/4"), ZpPoint::integer(2, 3)), CycloNum::root(2, 2, 3));
}

TEST(Character, PeriodicPointUsesFractionalPart) {
  // {3/8 * (-1)}_2 = 5/8.
  EXPECT_EQ(character(PHat::parse(2, "3/8"), ZpPoint::parse(2, ":1")), CycloNum::root(2, 3, 5));
}

TEST(HaarIntegral, Examples) {
  EXPECT_EQ(haar_integral(constant_fn<CycloNum>(3, CycloNum::one(3), 2)), CycloNum::one(3));
  EXPECT_EQ(haar_integral(indicator_fn<CycloNum>(2, 1, 0)), q_(2, 1, 2));
  EXPECT_EQ(haar_integral(indicator_fn<CycloNum>(3, 1, 0)), q_(3, 1, 3));
  EXPECT_TRUE(haar_integral(character_fn<CycloNum>(2, PHat::parse(2, "3/8"))).is_zero());
}

TEST(HaarIntegral, OrthogonalityOnBall) {
  for (u64 p : {2, 3}) {
    for (const auto& t : enumerate_ball(p, 3)) {
      CycloNum expect = t.is_zero() ? CycloNum::one(p) : CycloNum::zero(p);
      EXPECT_EQ(haar_integral(character_fn<CycloNum>(p, t, 3)), expect) << t.to_string();
    }
  }
}

TEST(FourierFwd, Examples) {
  EXPECT_TRUE(dual_equal(fourier_fwd(constant_fn<CycloNum>(2, CycloNum::one(2), 2)), delta0<CycloNum>(2)));
  ExactDual ind = fourier_fwd(indicator_fn<CycloNum>(2, 1, 0));
  EXPECT_TRUE(dual_equal(ind, dual_of(2, {{"0", q_(2, 1, 2)}, {"1/2", q_(2, 1, 2)}})));
  for (u64 p : {2, 3})
    for (const auto& s : enumerate_ball(p, 2))
      EXPECT_TRUE(dual_equal(fourier_fwd(character_fn<CycloNum>(p, s, 2)), dirac_dual<CycloNum>(p, s, CycloNum::one(p))));
}

TEST(FourierInv, Examples) {
  ExactFn one = fourier_inv(delta0<CycloNum>(2));
  EXPECT_TRUE(fn_equal(one, constant_fn<CycloNum>(2, CycloNum::one(2))));
  ExactFn f = fourier_inv(dual_of(2, {{"1/2", CycloNum::one(2)}}));
  EXPECT_EQ(f.level, 1u);
  EXPECT_EQ(f.values[0], CycloNum::one(2));
  EXPECT_EQ(f.values[1], q_(2, -1));
  ExactFn ind = indicator_fn<CycloNum>(2, 1, 0);
  EXPECT_TRUE(fn_equal(fourier_inv(fourier_fwd(ind)), ind));
}

TEST(ConvZp, Examples) {
  sampling::Rng rng(7);
  ExactFn f = sampling::random_fn(rng, 3, 2, 1);
  ExactFn h = conv_zp(f, constant_fn<CycloNum>(3, CycloNum::one(3)));
  EXPECT_TRUE(fn_equal(h, constant_fn<CycloNum>(3, haar_integral(f))));
  ExactFn ct = character_fn<CycloNum>(2, PHat::parse(2, "3/4"));
  ExactFn cs = character_fn<CycloNum>(2, PHat::parse(2, "1/4"), 2);
  EXPECT_TRUE(fn_equal(conv_zp(ct, ct), ct));
  EXPECT_TRUE(fn_equal(conv_zp(ct, cs), constant_fn<CycloNum>(2, CycloNum::zero(2))));
}

TEST(ConvDual, Examples) {
  ExactDual F = dual_of(3, {{"1/3", q_(3, 2)}, {"4/9", CycloNum::root(3, 1, 1)}});
  EXPECT_TRUE(dual_equal(conv_dual(F, delta0<CycloNum>(3)), F));
  auto s = PHat::parse(3, "2/9"), u = PHat::parse(3, "1/3");
  ExactDual D = conv_dual(dirac_dual<CycloNum>(3, s, CycloNum::one(3)), dirac_dual<CycloNum>(3, u, CycloNum::one(3)));
  EXPECT_TRUE(dual_equal(D, dirac_dual<CycloNum>(3, s + u, CycloNum::one(3))));
}

TEST(Translate, Examples) {
  auto s = PHat::parse(2, "3/8");
  EXPECT_TRUE(dual_equal(translate_dual(delta0<CycloNum>(2), s), dirac_dual<CycloNum>(2, -s, CycloNum::one(2))));
  ExactDual F = dual_of(2, {{"1/2", q_(2, 3)}, {"1/8", q_(2, 1, 5)}});
  EXPECT_TRUE(dual_equal(translate_dual(F, PHat::zero(2)), F));
  auto t = PHat::parse(2, "5/8");
  auto a = ZpPoint::integer(2, 11);
  ExactFn ch = character_fn<CycloNum>(2, t);
  EXPECT_TRUE(fn_equal(translate_fn(ch, a), scale_fn(ch, character(t, a))));
}

TEST(Parseval, Examples) {
  EXPECT_EQ(parseval(constant_fn<CycloNum>(2, CycloNum::one(2)), constant_fn<CycloNum>(2, CycloNum::one(2))),
            CycloNum::one(2));
  auto s = PHat::parse(3, "4/9"), u = PHat::parse(3, "1/9");
  EXPECT_EQ(parseval(character_fn<CycloNum>(3, s), character_fn<CycloNum>(3, -s)), CycloNum::one(3));
  EXPECT_TRUE(parseval(character_fn<CycloNum>(3, s), character_fn<CycloNum>(3, u)).is_zero());
}

TEST(Norms, Examples) {
  auto ctx = field_setup(Config::make(2, 5, 32, 3), 3);
  EXPECT_EQ(norm_fn(constant_fn<CycloNum>(2, CycloNum::one(2), 2), ctx).value(), 1);
  ExactDual F = dirac_dual<CycloNum>(2, PHat::zero(2), q_(2, 5));
  EXPECT_EQ(norm_dual_sup(F, ctx).value(), mpq_class(1, 5));
  ExactDual G = dirac_dual<CycloNum>(2, PHat::zero(2), q_(2, 25));
  EXPECT_EQ(norm_dual_window(G, 3, ctx).value(), mpq_class(1, 25));
  EXPECT_EQ(norm_dual_sup(ExactDual{2, {}}, ctx).value(), 0);
}

TEST(LCFn, LiftingPreservesEquality) {
  ExactFn f{2, 1, {q_(2, 1), q_(2, 2)}};
  ExactFn g = lift(f, 3);
  EXPECT_EQ(g.values.size(), 8u);
  EXPECT_TRUE(fn_equal(f, g));
  EXPECT_TRUE(dual_equal(fourier_fwd(f), fourier_fwd(g)));
  g.values[5] = q_(2, 7);
  EXPECT_FALSE(fn_equal(f, g));
}

TEST(DualFn, NoExplicitZeros) {
  ExactDual F{2, {}};
  F.add_to(PHat::parse(2, "1/2"), q_(2, 3));
  F.add_to(PHat::parse(2, "1/2"), q_(2, -3));
  EXPECT_TRUE(F.support.empty());
}

class FourierProps : public ::testing::TestWithParam<std::tuple<u64, u64>> {};

TEST_P(FourierProps, AgreesWithNaiveSums) {
  auto [p, q] = GetParam();
  sampling::Rng rng(1000 * p + q);
  for (int i = 0; i < 10; ++i) {
    auto level = static_cast<unsigned>(sampling::uniform(rng, 0, p == 2 ? 3 : 2));
    ExactFn f = sampling::random_fn(rng, p, level, 1);
    ExactFn g = sampling::random_fn(rng, p, static_cast<unsigned>(sampling::uniform(rng, 0, level)), 1);
    EXPECT_TRUE(dual_equal(fourier_fwd(f), naive_fwd(f)));
    EXPECT_TRUE(fn_equal(conv_zp(f, g), naive_conv(f, g)));
    ExactDual F = sampling::random_dual(rng, p, q, 2, 4, 1, -1, 2);
    ExactDual G = sampling::random_dual(rng, p, q, 2, 4, 1, -1, 2);
    EXPECT_TRUE(dual_equal(conv_dual(F, G), naive_conv_dual(F, G)));
  }
}

TEST_P(FourierProps, IsomorphismIdentities) {
  auto [p, q] = GetParam();
  sampling::Rng rng(7 * p + q);
  auto ctx = field_setup(Config::make(p, q, 64, 4), p == 2 ? 4 : 3);
  for (int i = 0; i < 20; ++i) {
    auto lf = static_cast<unsigned>(sampling::uniform(rng, 0, p == 2 ? 3 : 2));
    auto lg = static_cast<unsigned>(sampling::uniform(rng, 0, p == 2 ? 3 : 2));
    ExactFn f = sampling::random_fn(rng, p, lf, 1), g = sampling::random_fn(rng, p, lg, 1);
    ExactDual F = fourier_fwd(f), G = fourier_fwd(g);
    EXPECT_TRUE(fn_equal(fourier_inv(F), f));
    EXPECT_TRUE(dual_equal(fourier_fwd(mul_fn(f, g)), conv_dual(F, G)));
    EXPECT_TRUE(dual_equal(fourier_fwd(conv_zp(f, g)), mul_dual(F, G)));
    EXPECT_EQ(parseval(f, g), haar_integral(mul_fn(f, g)));
    EXPECT_EQ(norm_fn(to_numeric(f, ctx)), norm_dual_sup(to_numeric(F, ctx)));
    EXPECT_EQ(norm_fn(f, ctx), norm_dual_sup(F, ctx));
    auto a = ZpPoint::integer(p, sampling::uniform(rng, -20, 20));
    ExactDual T = fourier_fwd(translate_fn(f, a));
    for (const auto& [t, v] : F.support) EXPECT_EQ(T.at(t), character(t, a) * v);
    EXPECT_EQ(T.support.size(), F.support.size());
  }
}

TEST_P(FourierProps, WindowNormsAreMonotone) {
  auto [p, q] = GetParam();
  sampling::Rng rng(31 * p + q);
  auto ctx = field_setup(Config::make(p, q, 64, 3), 3);
  for (int i = 0; i < 20; ++i) {
    ExactDual F = sampling::random_dual(rng, p, q, 3, 6, 1, -2, 3);
    QNorm prev = norm_dual_window(F, 0, ctx);
    for (unsigned n = 1; n <= 4; ++n) {
      QNorm cur = norm_dual_window(F, n, ctx);
      EXPECT_LE(prev, cur);
      prev = cur;
    }
    EXPECT_LE(prev, norm_dual_sup(F, ctx));
  }
}

TEST_P(FourierProps, UltrametricEquality) {
  auto [p, q] = GetParam();
  sampling::Rng rng(131 * p + q);
  auto ctx = field_setup(Config::make(p, q, 64, 3), 3);
  int decided = 0;
  for (int i = 0; i < 40; ++i) {
    ExactDual A = sampling::random_dual(rng, p, q, 2, 3, 1, -2, 3);
    ExactDual B = sampling::random_dual(rng, p, q, 2, 3, 1, -2, 3);
    for (unsigned M = 0; M <= 2; ++M) {
      QNorm a = norm_dual_window(A, M, ctx), b = norm_dual_window(B, M, ctx);
      if (a == b) continue;
      ++decided;
      EXPECT_EQ(norm_dual_window(sub_dual(A, B), M, ctx), QNorm::max(a, b));
    }
  }
  EXPECT_GT(decided, 20);
}

INSTANTIATE_TEST_SUITE_P(Pairs, FourierProps,
                         ::testing::Values(std::tuple<u64, u64>{2, 5}, std::tuple<u64, u64>{2, 7},
                                           std::tuple<u64, u64>{3, 5}, std::tuple<u64, u64>{3, 7}));
