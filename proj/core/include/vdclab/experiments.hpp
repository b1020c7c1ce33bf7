#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdclab/correlate.hpp"
#include "vdclab/report.hpp"
#include "vdclab/spectral.hpp"
#include "vdclab/weyl.hpp"

namespace vdclab {

struct ZooEntry;

/// f_n = f o T^{k_n}.
struct OrbitSpec {
  AffineSystem T;
  CharVector f;
  IntegerSequenceSpec k = IntegerSequenceSpec::identity();

  static OrbitSpec from_zoo(const ZooEntry& entry);
  OrbitPtr orbit() const { return system_orbit(T, f, k); }
  friend bool operator==(const OrbitSpec&, const OrbitSpec&) = default;
};

/// c_n = a e(k_n x).
struct WeightSpec {
  IntegerSequenceSpec k = IntegerSequenceSpec::identity();
  Phase x;
  Complex amplitude = 1.0;

  WeightsPtr weights() const { return phase_weights(k, x, amplitude); }
  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

/// Settings shared by every driver.
struct RunOptions {
  Schedule schedule = Schedule::geometric(100000);
  Thresholds thresholds;
  unsigned threads = 1;
  friend bool operator==(const RunOptions&, const RunOptions&) = default;
};

struct VdcSuiteParams {
  OrbitSpec orbit;
  std::int64_t H = 64;
  double hypothesis_tol = 0.05;
  double conclusion_tol = 0.05;
  friend bool operator==(const VdcSuiteParams&, const VdcSuiteParams&) = default;
};

struct WeightedVdcParams {
  OrbitSpec orbit;
  WeightSpec weight;
  double tol = 0.05;
  friend bool operator==(const WeightedVdcParams&, const WeightedVdcParams&) = default;
};

struct OrthogonalityParams {
  OrbitSpec f;
  OrbitSpec g;
  double tol = 0.02;
  friend bool operator==(const OrthogonalityParams&, const OrthogonalityParams&) = default;
};

struct NfParams {
  AffineSystem T;
  AffineSystem S;
  IntegerSequenceSpec k;
  CharVector f;
  CharVector g;
  double tol = 0.05;
  std::int64_t ud_lags = 8;
  double ud_tol = 0.05;
  friend bool operator==(const NfParams&, const NfParams&) = default;
};

struct RecurrenceParams {
  AffineSystem T;
  AffineSystem S;
  IntegerSequenceSpec k;
  BoxUnion A;
  double tol = 0.01;
  /// Grid resolution for systems without an exact path.
  std::int64_t M = 200;
  std::optional<double> expected_limit;
  double limit_tol = 0.01;
};

struct RkParams {
  RkSpec rk;
  std::int64_t N = 500;
  std::int64_t M = 2000;
  /// Positivity side: mu(A cap T^-n A cap S_1^-n A cap ...) for n in R_k.
  AffineSystem T;
  std::vector<AffineSystem> S;
  BoxUnion A;
  double positivity_factor = 10.0;
  /// Non-recurrence side (k = 2): skew product and strip T x [-w, w).
  bool non_recurrence = true;
  Rational strip_half_width{1, 16};
};

struct CounterexampleParams {
  Irrational alpha = zoo_alpha();
  bool exploratory = true;
};

struct SingleTParams {
  AffineSystem T;
  AffineSystem S;
  std::vector<IntegerSequenceSpec> polys;
  CharVector f;
  std::vector<CharVector> g;
  double tol = 0.05;
  std::int64_t independence_lags = 64;
};

struct T1T2Params {
  AffineSystem T;
  std::vector<AffineSystem> R;
  AffineSystem S;
  AffineSystem W;
  std::vector<IntegerSequenceSpec> polys;
  CharVector f;
  std::vector<CharVector> h;
  std::vector<CharVector> g;
  double tol = 0.05;
  std::int64_t exhaustive_N = 200;
  std::int64_t max_N = 20000;
};

ExperimentReport run_vdc_suite(const VdcSuiteParams& p, const RunOptions& o);
ExperimentReport run_weighted_vdc(const WeightedVdcParams& p, const RunOptions& o);
ExperimentReport run_orthogonality(const OrthogonalityParams& p, const RunOptions& o);
ExperimentReport run_nf(const NfParams& p, const RunOptions& o);
ExperimentReport run_recurrence(const RecurrenceParams& p, const RunOptions& o);
/// Ignores o.schedule; the range is [1, p.N].
ExperimentReport run_rk(const RkParams& p, const RunOptions& o);
ExperimentReport run_counterexample(const CounterexampleParams& p, const RunOptions& o);
ExperimentReport run_single_T(const SingleTParams& p, const RunOptions& o);
ExperimentReport run_T1T2(const T1T2Params& p, const RunOptions& o);

/// First h in 1..H (or structural defect) for which
/// {p_1(n+h)-p_1(n), p_i(n+h)-p_1(n), p_i(n)-p_1(n) : i >= 2}
/// fails to be linearly independent modulo constants; empty if none.
std::optional<std::string> independence_violation(const std::vector<IntegerSequenceSpec>& polys, std::int64_t H);

/// Rotation whose coordinates' irrational parts have full rank, so that m.b
/// is irrational for every nonzero integer m.
bool is_totally_ergodic_rotation(const AffineSystem& S);

/// No eigenvalue of the matrix is a root of unity.
bool is_weakly_mixing_automorphism(const AffineSystem& S);

/// The same trigonometric polynomial with indices fingerprinted under another prime set.
CharVector with_primes(const CharVector& f, const PrimeSet& primes);

}  // namespace vdclab
