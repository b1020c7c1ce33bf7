#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vdclab/error.hpp"
#include "vdclab/experiments.hpp"
#include "vdclab/zoo.hpp"

using namespace vdclab;

namespace {

// The zoo irrationals recomputed from scratch in long double.
const long double kAlpha = std::sqrt(2.0L) - 1.0L;
const long double kBeta = (std::sqrt(5.0L) - 1.0L) / 2.0L;

CharVector e(std::initializer_list<std::int64_t> m) { return CharVector::character(CharIndex(m)); }

IntegerSequenceSpec poly(std::vector<Rational> c) { return IntegerSequenceSpec::polynomial_monomial(c); }
IntegerSequenceSpec squares() { return poly({{0, 1}, {0, 1}, {1, 1}}); }

AffineSystem rot(Phase a, Phase b) { return AffineSystem::rotation({a, b}); }

RunOptions small_run() {
  RunOptions o;
  o.schedule = Schedule({1000, 2000, 4000});
  return o;
}

long double dist_to_int(long double t) { return std::abs(t - std::nearbyint(t)); }

// |(1/N) sum_{n=1}^N e(phase(n))|, summed directly.
template <class F>
long double direct_abs(std::int64_t N, F phase) {
  oracle::cld acc = 0;
  for (std::int64_t n = 1; n <= N; ++n) acc += oracle::expi(phase(static_cast<long double>(n)));
  return std::abs(acc) / static_cast<long double>(N);
}

}  // namespace

TEST(VdcSuite, QuadraticGammaMatchesWeylSumOfDifferences) {
  // f_n = e(n^2 alpha): gamma(h) = (1/N) sum e((2hn + h^2) alpha).
  VdcSuiteParams p{OrbitSpec::from_zoo(zoo_entry("weyl_quadratic"))};
  p.H = 8;
  const RunOptions o = small_run();
  const ExperimentReport r = run_vdc_suite(p, o);
  for (const auto N : o.schedule.cutoffs()) {
    for (std::int64_t h = 1; h <= p.H; ++h) {
      const long double hh = static_cast<long double>(h);
      const long double want = direct_abs(N, [&](long double n) { return (2 * hh * n + hh * hh) * kAlpha; });
      EXPECT_NEAR(r.value("gamma_abs", N, h), static_cast<double>(want), 1e-9) << "N=" << N << " h=" << h;
    }
  }
  EXPECT_TRUE(audit(r).empty());
}

TEST(VdcSuite, ConstantOrbitAbstainsOrFails) {
  const ExperimentReport r = run_vdc_suite({OrbitSpec::from_zoo(zoo_entry("constant"))}, small_run());
  EXPECT_NE(r.verdict, Verdict::pass);
  EXPECT_NEAR(r.value("norm", 4000, 0), 1.0, 1e-12);
}

TEST(WeightedVdc, SkewOrbitNormIsInverseSqrtN) {
  // c_n f_n are characters with distinct indices, so the average has norm N^{-1/2}.
  WeightedVdcParams p{OrbitSpec::from_zoo(zoo_entry("skew_lebesgue")),
                      {IntegerSequenceSpec::identity(), Phase::of(zoo_alpha())}};
  const RunOptions o = small_run();
  const ExperimentReport r = run_weighted_vdc(p, o);
  for (const auto N : o.schedule.cutoffs()) {
    EXPECT_NEAR(r.value("norm", N, 0), 1.0 / std::sqrt(static_cast<double>(N)), 1e-12);
  }
  EXPECT_EQ(r.verdict, Verdict::pass) << r.verdict_reason;
}

TEST(Orthogonality, MatchesDirectInnerProduct) {
  OrthogonalityParams p{OrbitSpec::from_zoo(zoo_entry("weyl_quadratic")),
                        OrbitSpec::from_zoo(zoo_entry("rotation_beta"))};
  const RunOptions o = small_run();
  const ExperimentReport r = run_orthogonality(p, o);
  for (const auto N : o.schedule.cutoffs()) {
    const long double want = direct_abs(N, [](long double n) { return n * n * kAlpha - n * kBeta; });
    EXPECT_NEAR(r.value("inner_abs", N, 0), static_cast<double>(want), 1e-9) << N;
  }
}

TEST(Nf, DistanceMatchesDirectSum) {
  // T^n e(x) . S^{n^2} e(y) = e(x + y) e(n alpha + n^2 beta), and the target is 0.
  const auto T = rot(Phase::of(zoo_alpha()), Phase{});
  const auto S = rot(Phase{}, Phase::of(zoo_beta()));
  const RunOptions o = small_run();
  const ExperimentReport r = run_nf({T, S, squares(), e({1, 0}), e({0, 1})}, o);
  for (const auto N : o.schedule.cutoffs()) {
    const long double want = direct_abs(N, [](long double n) { return n * kAlpha + n * n * kBeta; });
    EXPECT_NEAR(r.value("D", N, 0), static_cast<double>(want), 1e-9) << N;
  }
}

TEST(Recurrence, ExactPathMatchesClosedForm) {
  // For A = [0,1/2)^2: mu(A cap T^-n A cap S^-n^2 A) = (1/2 - |n alpha|)(1/2 - |n^2 beta|).
  const auto T = rot(Phase::of(zoo_alpha()), Phase{});
  const auto S = rot(Phase{}, Phase::of(zoo_beta()));
  RecurrenceParams p{T, S, squares(), {Box{{Arc::from_rationals({0, 1}, {1, 2}), Arc::from_rationals({0, 1}, {1, 2})}}}};
  RunOptions o;
  o.schedule = Schedule({100, 200, 400});
  const ExperimentReport r = run_recurrence(p, o);
  long double sum = 0;
  std::int64_t q = 0;
  for (std::int64_t n = 1; n <= 400; ++n) {
    const long double x = static_cast<long double>(n);
    sum += (0.5L - dist_to_int(x * kAlpha)) * (0.5L - dist_to_int(x * x * kBeta));
    if (n == o.schedule[static_cast<std::size_t>(q)]) {
      EXPECT_NEAR(r.value("recurrence_average", n, 0), static_cast<double>(sum / x), 1e-12) << n;
      ++q;
    }
  }
  EXPECT_DOUBLE_EQ(r.value("mu_A_cubed", 400, 0), 1.0 / 64);
}

TEST(Recurrence, CoarseGridAbstainsWithRequiredResolution) {
  const AffineSystem skew(IntMatrix::from_rows({{1, 0}, {1, 1}}), {Phase::of(zoo_alpha()), Phase{}});
  RecurrenceParams p{skew, skew, IntegerSequenceSpec::identity(),
                     {Box{{Arc::from_rationals({0, 1}, {1, 2}), Arc::from_rationals({0, 1}, {1, 2})}}}};
  p.M = 100;
  RunOptions o;
  o.schedule = Schedule({10, 20, 40});
  const ExperimentReport r = run_recurrence(p, o);
  EXPECT_EQ(r.verdict, Verdict::abstain);
  ASSERT_TRUE(r.required_resolution.has_value());
  EXPECT_GT(*r.required_resolution, 100);
}

TEST(Counterexample, AverageIsExactlyOne) {
  const RunOptions o = small_run();
  const ExperimentReport r = run_counterexample({}, o);
  for (const auto N : o.schedule.cutoffs()) {
    EXPECT_EQ(r.value("deviation", N, 0), 0.0);
    EXPECT_DOUBLE_EQ(r.value("average_norm", N, 0), 1.0);
  }
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(SingleT, RejectsDependentFamily) {
  const auto T = rot(Phase::of(zoo_alpha()), Phase{});
  const auto S = rot(Phase::of(zoo_gamma()), Phase::of(zoo_beta()));
  const auto lin = poly({{0, 1}, {1, 1}, {1, 1}});
  const ExperimentReport r = run_single_T({T, S, {squares(), lin}, e({1, 0}), {e({0, 1}), e({0, 1})}}, small_run());
  EXPECT_EQ(r.verdict, Verdict::abstain);
  EXPECT_NE(r.verdict_reason.find("sequence hypothesis"), std::string::npos) << r.verdict_reason;
}

TEST(SingleT, NonTotallyErgodicSAbstains) {
  const auto T = rot(Phase::of(zoo_alpha()), Phase{});
  const auto S = rot(Phase{}, Phase::of(zoo_beta()));
  const ExperimentReport r = run_single_T({T, S, {squares()}, e({1, 0}), {e({0, 1})}}, small_run());
  EXPECT_EQ(r.verdict, Verdict::abstain);
}

TEST(Hypotheses, PolynomialIndependence) {
  const auto cube = poly({{0, 1}, {0, 1}, {0, 1}, {1, 1}});
  const auto fifth = poly({{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {1, 1}});
  EXPECT_FALSE(independence_violation({squares(), cube, fifth}, 64).has_value());
  const auto v = independence_violation({squares(), poly({{0, 1}, {1, 1}, {1, 1}})}, 64);
  ASSERT_TRUE(v.has_value());
  EXPECT_NE(v->find("h=1"), std::string::npos) << *v;
}

TEST(Hypotheses, TotalErgodicityAndWeakMixing) {
  const Phase a = Phase::of(zoo_alpha()), b = Phase::of(zoo_beta());
  EXPECT_TRUE(is_totally_ergodic_rotation(rot(a, b)));
  EXPECT_FALSE(is_totally_ergodic_rotation(rot(Phase{}, b)));
  EXPECT_FALSE(is_totally_ergodic_rotation(rot(a, a)));

  const Phase z{};
  EXPECT_TRUE(is_weakly_mixing_automorphism(AffineSystem(IntMatrix::from_rows({{2, 1}, {1, 1}}), {z, z})));
  EXPECT_FALSE(is_weakly_mixing_automorphism(AffineSystem::identity(2)));
  // Order 4 and order 6 rotations of the lattice.
  EXPECT_FALSE(is_weakly_mixing_automorphism(AffineSystem(IntMatrix::from_rows({{0, -1}, {1, 0}}), {z, z})));
  EXPECT_FALSE(is_weakly_mixing_automorphism(AffineSystem(IntMatrix::from_rows({{0, -1}, {1, 1}}), {z, z})));
  // Parabolic: eigenvalue 1.
  EXPECT_FALSE(is_weakly_mixing_automorphism(AffineSystem(IntMatrix::from_rows({{1, 0}, {1, 1}}), {z, z})));
}

TEST(Report, AuditCatchesTampering) {
  ExperimentReport r;
  r.name = "t";
  r.conclude();
  EXPECT_EQ(r.verdict, Verdict::abstain);

  r.add(10, 0, "x", 0.5);
  EXPECT_TRUE(r.check("x small", "x", 10, 0, Cmp::lt, 1.0));
  r.conclude();
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_TRUE(audit(r).empty());

  ExperimentReport forged = r;
  forged.rows[0].value = 2.0;
  EXPECT_FALSE(audit(forged).empty());

  ExperimentReport ambiguous = r;
  ambiguous.add(10, 0, "x", 0.1);
  EXPECT_FALSE(audit(ambiguous).empty());
  EXPECT_THROW(ambiguous.value("x", 10, 0), DomainError);
}

TEST(Report, CsvFormats) {
  ExperimentReport r;
  r.headline = "norm";
  r.add(1000, 0, "norm", 0.1);
  r.add(1000, 3, "norm", 7.0);
  r.add(2000, 0, "norm", 0.05, 1e-3);
  EXPECT_EQ(metrics_csv(r), "N,aux,metric,value,error_bound\n1000,0,norm,0.10000000000000001,0\n"
                            "1000,3,norm,7,0\n2000,0,norm,0.050000000000000003,0.001\n");
  EXPECT_EQ(decay_csv(r), "N,norm\n1000,0.10000000000000001\n2000,0.050000000000000003\n");
}
