#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vdclab/correlate.hpp"
#include "vdclab/error.hpp"
#include "vdclab/weyl.hpp"

using namespace vdclab;

namespace {

CharVector e(std::initializer_list<std::int64_t> m, Complex c = 1.0) { return CharVector::character(CharIndex(m), c); }

// Direct O(N H) loop over char_inner.
std::vector<Complex> direct_profile(const Orbit& f, const Orbit& g, std::int64_t H, std::int64_t N) {
  std::vector<Complex> out(static_cast<std::size_t>(H) + 1);
  for (std::int64_t h = 0; h <= H; ++h) {
    oracle::cld acc = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
      const Complex v = char_inner(f.at(n + h), g.at(n));
      acc += oracle::cld(v.real(), v.imag());
    }
    acc /= static_cast<long double>(N);
    out[static_cast<std::size_t>(h)] = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  }
  return out;
}

const Irrational kA = zoo_alpha();
const Irrational kB = zoo_beta();

}  // namespace

TEST(Schedule, GeometricDefault) {
  const Schedule s = Schedule::geometric(100000);
  EXPECT_EQ(s.cutoffs(), (std::vector<std::int64_t>{1000, 2000, 4000, 8000, 16000, 32000, 64000, 100000}));
  EXPECT_THROW(Schedule({1, 2}), DomainError);
  EXPECT_THROW(Schedule({1, 3, 3}), DomainError);
  EXPECT_EQ(default_lag_budget(Schedule({10, 20, 4096})), 64);
}

TEST(CesaroCorrelation, RotationOrbit) {
  const auto f = system_orbit(AffineSystem::rotation({Phase::of(kA)}), e({1}));
  const Schedule s({1000, 2000, 4096});
  const CorrelationProfile p = cesaro_correlation(*f, 64, s);
  for (std::int64_t h = 0; h <= 64; ++h) {
    EXPECT_NEAR(std::abs(p.top()[static_cast<std::size_t>(h)] - unit_phase(mul_turns(h, kA.value()))), 0.0, 1e-12);
  }
  EXPECT_LT(p.stability, 1e-12);
}

TEST(CesaroCorrelation, SkewProductIsExactlyZeroOffDiagonal) {
  const auto f = system_orbit(AffineSystem::skew_product(Phase::of(kA)), e({0, 1}));
  const CorrelationProfile p = cesaro_correlation(*f, 31, Schedule({100, 500, 1000}));
  EXPECT_EQ(p.top()[0], Complex(1.0));
  for (std::size_t h = 1; h <= 31; ++h) EXPECT_EQ(p.top()[h], Complex(0.0));
  const auto direct = direct_profile(*f, *f, 31, 1000);
  for (std::size_t h = 0; h <= 31; ++h) EXPECT_EQ(direct[h], p.top()[h]);
}

TEST(CesaroCorrelation, ConstantOrbit) {
  const auto f = system_orbit(AffineSystem::identity(1), CharVector::constant(1));
  const CorrelationProfile p = cesaro_correlation(*f, 10, Schedule({100, 200, 300}));
  for (const auto& g : p.top()) EXPECT_NEAR(std::abs(g - 1.0), 0.0, 1e-15);
}

TEST(CesaroCorrelation, EngineMatchesDirectLoopOnMixedOrbit) {
  // Dense rotation part (FFT path) plus sparse skew part (direct path), with
  // blocks crossing schedule cutoffs that are not block aligned.
  const AffineSystem T = AffineSystem::product(AffineSystem::rotation({Phase::of(kA)}),
                                               AffineSystem::skew_product(Phase::of(kB)));
  const CharVector f = e({1, 0, 0}, 0.6) + e({0, 0, 1}, Complex(0, 0.8)) + e({2, 1, 0}, 0.3);
  const auto orbit = system_orbit(T, f);
  const Schedule s({777, 1500, 3001});
  const CorrelationProfile p = cesaro_correlation(*orbit, 40, s);
  const auto direct = direct_profile(*orbit, *orbit, 40, 3001);
  for (std::size_t h = 0; h <= 40; ++h) EXPECT_NEAR(std::abs(direct[h] - p.top()[h]), 0.0, 1e-12) << h;
  const auto mid = direct_profile(*orbit, *orbit, 40, 777);
  for (std::size_t h = 0; h <= 40; ++h) EXPECT_NEAR(std::abs(mid[h] - p.gammas[0][h]), 0.0, 1e-12) << h;
}

TEST(CesaroCorrelation, LagBudgetEnforced) {
  const auto f = system_orbit(AffineSystem::identity(1), CharVector::constant(1));
  EXPECT_THROW(cesaro_correlation(*f, 33, Schedule({10, 100, 1000})), DomainError);
  EXPECT_EQ(cesaro_correlation(*f, -1, Schedule({10, 100, 1000})).H, 31);
}

TEST(CrossCorrelation, MatchesDirectLoop) {
  const auto f = system_orbit(AffineSystem::rotation({Phase::of(kA)}), e({1}) + e({3}, 0.5));
  const auto g = system_orbit(AffineSystem::rotation({Phase::of(kB)}), e({1}) + e({2}, 0.25));
  const CorrelationProfile p = cross_correlation(*f, *g, 20, Schedule({200, 400, 900}));
  const auto direct = direct_profile(*f, *g, 20, 900);
  for (std::size_t h = 0; h <= 20; ++h) EXPECT_NEAR(std::abs(direct[h] - p.top()[h]), 0.0, 1e-12);
}

TEST(AveragedNorm, Examples) {
  const Schedule s = Schedule::geometric(100000);
  const auto quad = system_orbit(AffineSystem::rotation({Phase::of(kA)}), e({1}),
                                 IntegerSequenceSpec::polynomial_binomial({0, 1, 2}));
  const auto norms = averaged_norm(*quad, *constant_weights(), s);
  const double weyl = std::abs(weyl_sum(IntegerSequenceSpec::polynomial_binomial({0, 1, 2}), kA, 100000));
  EXPECT_NEAR(norms.back(), weyl, 1e-12);
  EXPECT_LT(norms.back(), 0.02);

  const auto constant = system_orbit(AffineSystem::identity(1), e({1}));
  for (double v : averaged_norm(*constant, *constant_weights(), Schedule({10, 20, 30}))) EXPECT_NEAR(v, 1.0, 1e-15);

  const auto alternating = phase_weights(IntegerSequenceSpec::identity(), Phase::rational(1, 2));
  const auto signed_orbit = scaled_orbit(alternating, constant);
  for (double v : averaged_norm(*signed_orbit, *alternating, Schedule({10, 21, 30}))) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(AveragedNorm, Linearity) {
  const auto skew = system_orbit(AffineSystem::skew_product(Phase::of(kA)), e({0, 1}) + e({1, 0}, 0.5));
  const auto w = phase_weights(IntegerSequenceSpec::polynomial_binomial({0, 1, 2}), Phase::of(kB));
  const Schedule s({100, 1000, 5000});
  const auto a = averaged_norm(*skew, *w, s);
  const auto b = averaged_norm(*scaled_orbit(w, skew), *constant_weights(), s);
  for (std::size_t q = 0; q < s.size(); ++q) EXPECT_EQ(a[q], b[q]);
}

TEST(AveragedNorm, SkewLebesgueOrbitDecaysLikeInverseRoot) {
  const auto skew = system_orbit(AffineSystem::skew_product(Phase::of(kA)), e({0, 1}));
  const Schedule s({100, 1000, 10000});
  const auto v = averaged_norm(*skew, *constant_weights(), s);
  for (std::size_t q = 0; q < s.size(); ++q) EXPECT_NEAR(v[q], 1.0 / std::sqrt(static_cast<double>(s[q])), 1e-14);
}

TEST(ProductAverage, Examples) {
  const AffineSystem R = AffineSystem::rotation({Phase::of(kA)});
  const CharVector f = e({1}) + e({2}, 0.5);
  const auto single = product_average({{R, IntegerSequenceSpec::constant(0), f}}, Schedule({5, 10, 15}));
  for (const auto& v : single) EXPECT_NEAR((v - f).norm(), 0.0, 1e-15);

  // T(x,y) = (x, y+x), S(x,y) = (x+2a, y+x); f = e(x-y), h = e(y), g = e(-x).
  const AffineSystem T(IntMatrix::from_rows({{1, 0}, {1, 1}}), {Phase{}, Phase{}});
  const AffineSystem S(IntMatrix::from_rows({{1, 0}, {1, 1}}), {Phase::of(kA, 2), Phase{}});
  const auto tri = IntegerSequenceSpec::polynomial_binomial({0, 0, 1});
  const Schedule s = Schedule::geometric(100000);
  const auto avg = product_average({{T, IntegerSequenceSpec::identity(), e({1, -1})},
                                    {S, IntegerSequenceSpec::identity(), e({0, 1})},
                                    {S, tri, e({-1, 0})}},
                                   s);
  for (const auto& v : avg) EXPECT_LT((v - CharVector::constant(2)).norm(), 1e-9);

  // Two rotations with k_n = n^2: norm is the Weyl sum of n a + n^2 b.
  const AffineSystem Ta = AffineSystem::rotation({Phase::of(kA), Phase{}});
  const AffineSystem Sb = AffineSystem::rotation({Phase{}, Phase::of(kB)});
  const auto sq = IntegerSequenceSpec::polynomial_binomial({0, 1, 2});
  const auto two = product_average({{Ta, IntegerSequenceSpec::identity(), e({1, 0})}, {Sb, sq, e({0, 1})}},
                                   Schedule({1000, 10000, 100000}));
  oracle::cld acc = 0;
  const std::uint64_t a64 = static_cast<std::uint64_t>(kA.value() >> 64);
  const std::uint64_t b64 = static_cast<std::uint64_t>(kB.value() >> 64);
  for (std::uint64_t n = 1; n <= 100000; ++n) acc += oracle::expi(std::ldexp(static_cast<long double>(n * a64 + n * n * b64), -64));
  EXPECT_NEAR(two.back().norm(), static_cast<double>(std::abs(acc)) / 100000.0, 1e-9);
  EXPECT_LE(two.back().norm(), 0.02);
}

TEST(BoxMeasure, Examples) {
  const Box half{{Arc::from_rationals({0, 1}, {1, 2}), Arc::from_rationals({0, 1}, {1, 2})}};
  const GridMeasure g = box_measure({{AffineSystem::identity(2), 0, {half}}}, 100);
  EXPECT_NEAR(g.value, 0.25, 2.0 / 100);
  EXPECT_GE(g.error_bound, std::abs(g.value - 0.25));

  const Box quarter{{Arc::from_rationals({0, 1}, {1, 4}), Arc::from_rationals({0, 1}, {1, 4})}};
  const AffineSystem shift = AffineSystem::rotation({Phase::rational(1, 2), Phase::rational(1, 2)});
  const GridMeasure z = box_measure({{AffineSystem::identity(2), 0, {quarter}}, {shift, 1, {quarter}}}, 200);
  EXPECT_EQ(z.survivors, 0u);
  EXPECT_EQ(z.value, 0.0);

  EXPECT_THROW(box_measure({{AffineSystem::identity(2), 0, {half}}}, 10, 0.01), ResolutionError);
}

TEST(BoxMeasure, AgreesWithExactOnRotationProducts) {
  const Box a{{Arc::from_rationals({0, 1}, {1, 2}), Arc::from_rationals({1, 10}, {7, 10})}};
  const AffineSystem T = AffineSystem::rotation({Phase::of(kA), Phase{}});
  const AffineSystem S = AffineSystem::rotation({Phase{}, Phase::of(kB)});
  for (std::int64_t n : {1, 2, 7, 30}) {
    const std::vector<BoxConstraint> sets{{T, 0, {a}}, {T, n, {a}}, {S, n * n, {a}}};
    const GridMeasure g = box_measure(sets, 400, 1.0, 2);
    const double exact = interval_measure_exact(sets);
    EXPECT_LE(std::abs(g.value - exact), g.error_bound) << n;
  }
}

TEST(BoxMeasure, ThreadCountDoesNotChangeResult) {
  const Box a{{Arc::from_rationals({0, 1}, {9, 10}), Arc::from_rationals({0, 1}, {9, 10})}};
  const AffineSystem T = AffineSystem::skew_product(Phase::of(kA));
  const std::vector<BoxConstraint> sets{{T, 0, {a}}, {T, 5, {a}}};
  EXPECT_EQ(box_measure(sets, 300, 1.0, 1).survivors, box_measure(sets, 300, 1.0, 3).survivors);
}

TEST(IntervalMeasureExact, Examples) {
  const Box half{{Arc::from_rationals({0, 1}, {1, 2})}};
  auto overlap = [&](Rational t) {
    const AffineSystem R = AffineSystem::rotation({Phase::rational(t.num, t.den)});
    return interval_measure_exact({{AffineSystem::identity(1), 0, {half}}, {R, 1, {half}}});
  };
  EXPECT_NEAR(overlap({3, 10}), 0.2, 1e-15);
  EXPECT_NEAR(overlap({0, 1}), 0.5, 1e-15);
  EXPECT_NEAR(overlap({3, 4}), 0.25, 1e-15);
  // Oracle: fine grid count for the wraparound case.
  int inside = 0;
  const int M = 100000;
  for (int j = 0; j < M; ++j) {
    const double x = (j + 0.5) / M;
    const double y = std::fmod(x + 0.75, 1.0);
    inside += (x < 0.5 && y < 0.5);
  }
  EXPECT_NEAR(overlap({3, 4}), static_cast<double>(inside) / M, 1e-4);
  EXPECT_THROW(interval_measure_exact({{AffineSystem::skew_product(Phase{}), 1, {}}}), DomainError);
}
