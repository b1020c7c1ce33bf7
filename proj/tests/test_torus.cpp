#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vdclab/affine_system.hpp"
#include "vdclab/char_vector.hpp"
#include "vdclab/error.hpp"
#include "vdclab/phase.hpp"

using namespace vdclab;

namespace {

CharVector e(std::initializer_list<std::int64_t> m, Complex c = 1.0) { return CharVector::character(CharIndex(m), c); }

long double turns_ld(Turns t) { return std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(t >> 64)), -64); }

}  // namespace

TEST(CharInner, Orthonormality) {
  EXPECT_EQ(char_inner(e({1, 0}), e({1, 0})), Complex(1.0));
  EXPECT_EQ(char_inner(e({1, 0}), e({0, 1})), Complex(0.0));
  const CharVector u = e({1}, 2.0) + e({2}, Complex(0, 1));
  EXPECT_EQ(char_inner(u, e({2})), Complex(0, 1));
}

TEST(CharInner, RandomPairs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(-50, 50);
  for (int t = 0; t < 500; ++t) {
    const CharIndex a{dist(rng), dist(rng), dist(rng)};
    const CharIndex b{dist(rng), dist(rng), dist(rng)};
    const Complex expect = (a == b) ? 1.0 : 0.0;
    EXPECT_EQ(char_inner(CharVector::character(a), CharVector::character(b)), expect);
    EXPECT_EQ(char_inner(CharVector::character(a), CharVector::character(a)), Complex(1.0));
  }
}

TEST(CharCombine, Examples) {
  const std::vector<std::pair<Complex, CharVector>> cancel{{1.0, e({1})}, {-1.0, e({1})}};
  EXPECT_TRUE(char_combine(cancel).empty());
  const std::vector<std::pair<Complex, CharVector>> twice{{2.0, e({1})}};
  EXPECT_EQ(char_combine(twice).coeff(CharIndex{1}), Complex(2.0));
  const std::vector<std::pair<Complex, CharVector>> two{{1.0, e({1})}, {1.0, e({2})}};
  EXPECT_DOUBLE_EQ(char_combine(two).norm2(), 2.0);
}

TEST(CharMul, Examples) {
  EXPECT_EQ(char_mul(e({1, 0}), e({0, 1})), e({1, 1}));
  EXPECT_EQ(char_mul(e({3, -2}), e({-3, 2})), CharVector::constant(2));
  // (e1 + e2)(e1 - e2): cross terms cancel, leaving e2 - e4.
  const CharVector p = char_mul(e({1}) + e({2}), e({1}) - e({2}));
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.coeff(CharIndex{2}), Complex(1.0));
  EXPECT_EQ(p.coeff(CharIndex{4}), Complex(-1.0));
  EXPECT_EQ(p.coeff(CharIndex{3}), Complex(0.0));
}

TEST(SystemPower, SkewProductTranslation) {
  const Irrational a = zoo_alpha();
  const AffineSystem T = AffineSystem::skew_product(Phase::of(a));
  const AffineSystem T2 = system_power(T, 2);
  EXPECT_EQ(T2.translation()[0], Phase::of(a, 2));
  EXPECT_EQ(T2.translation()[1], Phase::of(a, 1));
  // C(n,2) alpha in the second slot
  const AffineSystem T9 = system_power(T, 9);
  EXPECT_EQ(T9.translation()[1], Phase::of(a, 36));
  EXPECT_EQ(T9.matrix()(1, 0), 9);
  EXPECT_EQ(system_power(T, 0), AffineSystem::identity(2));
}

TEST(SystemPower, RotationAndCompose) {
  const Irrational a = zoo_alpha();
  const AffineSystem R = AffineSystem::rotation({Phase::of(a)});
  EXPECT_EQ(system_power(R, 5).translation()[0], Phase::of(a, 5));
  const AffineSystem T = AffineSystem::skew_product(Phase::of(a));
  EXPECT_EQ(system_power(T, 7), T.compose(system_power(T, 6)));
  EXPECT_EQ(system_power(T, -3).compose(system_power(T, 3)), AffineSystem::identity(2));
}

TEST(SystemPower, OverflowNamesMultiplier) {
  // C(n, 2) leaves the 64-bit matrix range and C(n, 3) the 128-bit phase range.
  const AffineSystem T(IntMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0, 1, 1}}),
                       {Phase::of(zoo_alpha()), Phase{}, Phase{}});
  EXPECT_NO_THROW(system_power(T, std::int64_t{1} << 20));
  try {
    system_power(T, std::int64_t{1} << 50);
    FAIL() << "expected overflow";
  } catch (const OverflowError& err) {
    EXPECT_NE(std::string(err.what()).find("n="), std::string::npos) << err.what();
  }
}

TEST(Pushforward, SkewProductMatchesGridEvaluation) {
  const Irrational a = zoo_alpha();
  const AffineSystem T = AffineSystem::skew_product(Phase::of(a));
  const CharVector f = e({0, 1});
  const CharVector g = pushforward(T, f, 2);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.terms()[0].first, (CharIndex{2, 1}));
  EXPECT_NEAR(std::abs(g.terms()[0].second - unit_phase(a.value())), 0.0, 1e-15);

  // f(T(T(x,y))) on a 64x64 grid, iterating the map by hand.
  const long double al = turns_ld(a.value());
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      long double x = i / 64.0L, y = j / 64.0L;
      for (int step = 0; step < 2; ++step) {
        const long double nx = x + al, ny = y + x;
        x = oracle::frac(nx);
        y = oracle::frac(ny);
      }
      const oracle::cld direct = oracle::expi(y);
      const oracle::cld viaf = oracle::eval(g, {i / 64.0L, j / 64.0L});
      worst = std::max(worst, static_cast<double>(std::abs(direct - viaf)));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Pushforward, Basics) {
  const Irrational a = zoo_alpha();
  const AffineSystem R = AffineSystem::rotation({Phase::of(a)});
  EXPECT_EQ(pushforward(R, e({1}), 0), e({1}));
  const CharVector g = pushforward(R, e({1}), 11);
  EXPECT_NEAR(std::abs(g.coeff(CharIndex{1}) - unit_phase(mul_turns(11, a.value()))), 0.0, 1e-15);
}

TEST(Pushforward, UnitarityAndGroupLaw) {
  const Irrational a = zoo_alpha();
  const Irrational b = zoo_beta();
  const AffineSystem T(IntMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0, 1, 1}}),
                       {Phase::of(a), Phase::of(b), Phase::rational(1, 3)});
  const AffineSystem cat(IntMatrix::from_rows({{2, 1}, {1, 1}}), {Phase{}, Phase{}});
  const CharVector f = e({1, 2, -1}, Complex(0.5, 0.25)) + e({0, 0, 1}, 2.0) + e({3, 0, 0}, Complex(0, -1));
  const CharVector g = e({1, 0}, 0.7) + e({0, 1}, Complex(0.1, 0.3));
  for (std::int64_t n : {1, 2, 5, 17, 40}) {
    for (std::int64_t m : {0, 1, 3, 12}) {
      const CharVector lhs = pushforward(T, f, m + n);
      const CharVector rhs = pushforward(T, pushforward(T, f, n), m);
      ASSERT_EQ(lhs.size(), rhs.size());
      for (std::size_t k = 0; k < lhs.size(); ++k) {
        EXPECT_EQ(lhs.terms()[k].first, rhs.terms()[k].first);
        EXPECT_NEAR(std::abs(lhs.terms()[k].second - rhs.terms()[k].second), 0.0, 1e-12);
      }
      EXPECT_NEAR(lhs.norm(), f.norm(), 1e-14);
      const CharVector c1 = pushforward(cat, g, m + n);
      const CharVector c2 = pushforward(cat, pushforward(cat, g, n), m);
      EXPECT_EQ(c1, c2);
    }
  }
}

TEST(Pushforward, HyperbolicIndicesOutgrowExactBudget) {
  const AffineSystem cat(IntMatrix::from_rows({{2, 1}, {1, 1}}), {Phase{}, Phase{}});
  const CharVector g = e({1, 0});
  const CharVector far = pushforward(cat, g, 5000);
  ASSERT_EQ(far.size(), 1u);
  EXPECT_FALSE(far.terms()[0].first.exact());
  EXPECT_EQ(pushforward(cat, far, 1), pushforward(cat, g, 5001));
  EXPECT_EQ(pushforward(cat, far, -5000), g);
}

TEST(InvariantProjection, Examples) {
  const Irrational a = zoo_alpha();
  const AffineSystem R = AffineSystem::rotation({Phase::of(a)});
  const CharVector f = CharVector::constant(1, 3.0) + e({1});
  EXPECT_EQ(invariant_projection(R, f), CharVector::constant(1, 3.0));
  const AffineSystem T = AffineSystem::skew_product(Phase::of(a));
  EXPECT_TRUE(invariant_projection(T, e({4, 0})).empty());
  EXPECT_TRUE(invariant_projection(T, e({0, 1})).empty());
  const CharVector h = e({2, 0}) + e({0, 3}, 0.5);
  EXPECT_EQ(invariant_projection(AffineSystem::identity(2), h), h);
}

TEST(InvariantProjection, SkewEigenfunctionAverageVanishes) {
  // Cesaro average of exp(2 pi i m n alpha) computed directly.
  const Irrational a = zoo_alpha();
  const long double al = turns_ld(a.value());
  oracle::cld acc = 0;
  const int N = 100000;
  for (int n = 1; n <= N; ++n) acc += oracle::expi(oracle::frac(3 * n * al));
  EXPECT_LT(std::abs(acc / static_cast<long double>(N)), 1e-3);
}

TEST(InvariantProjection, FiniteCyclesAndIdempotence) {
  // Rotation by a rational: order-4 phases; swap matrix: finite index cycle.
  const AffineSystem quarter = AffineSystem::rotation({Phase::rational(1, 4)});
  EXPECT_EQ(invariant_projection(quarter, e({4}) + e({2})), e({4}));
  const AffineSystem swap(IntMatrix::from_rows({{0, 1}, {1, 0}}), {Phase{}, Phase{}});
  const CharVector p = invariant_projection(swap, e({1, 0}));
  EXPECT_NEAR(std::abs(p.coeff(CharIndex{1, 0}) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.coeff(CharIndex{0, 1}) - 0.5), 0.0, 1e-15);
  EXPECT_EQ(invariant_projection(swap, p), p);
  const AffineSystem cat(IntMatrix::from_rows({{2, 1}, {1, 1}}), {Phase{}, Phase{}});
  EXPECT_TRUE(invariant_projection(cat, e({1, 0})).empty());
}

TEST(InvariantProjection, MeanErgodicAlongSchedule) {
  const Irrational a = zoo_alpha();
  const AffineSystem T = AffineSystem::skew_product(Phase::of(a));
  const CharVector f = CharVector::constant(2, 0.5) + e({1, 0}) + e({0, 1});
  const CharVector target = invariant_projection(T, f);
  double prev = 1e9;
  for (std::int64_t N : {1000, 4000, 16000}) {
    std::vector<std::pair<Complex, CharVector>> terms;
    for (std::int64_t n = 1; n <= N; ++n) terms.emplace_back(1.0 / static_cast<double>(N), pushforward(T, f, n));
    const double dist = (char_combine(terms) - target).norm();
    EXPECT_LT(dist, prev);
    prev = dist;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(PhaseParse, ExpressionsAndSymbols) {
  SymbolTable st{{"alpha", zoo_alpha()}};
  const Phase p = Phase::parse("1/2+2*alpha", st);
  EXPECT_EQ(p, Phase::rational(1, 2) + Phase::of(zoo_alpha(), 2));
  EXPECT_THROW(Phase::parse("beta", st), DomainError);
  EXPECT_EQ(Phase::parse("3/2", st), Phase::rational(1, 2));
}

TEST(AffineSystem, RejectsNonUnimodular) {
  EXPECT_THROW(AffineSystem(IntMatrix::from_rows({{2, 0}, {0, 1}}), {Phase{}, Phase{}}), DomainError);
}
