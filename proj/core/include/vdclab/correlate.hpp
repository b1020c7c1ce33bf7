#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "vdclab/affine_system.hpp"
#include "vdclab/char_vector.hpp"
#include "vdclab/orbit.hpp"
#include "vdclab/sequence.hpp"

namespace vdclab {

/// Strictly increasing cutoffs N_1 < ... < N_Q with Q >= 3.
class Schedule {
 public:
  Schedule() = default;
  /// Throws DomainError unless strictly increasing, positive, Q >= 3.
  explicit Schedule(std::vector<std::int64_t> cutoffs);
  /// base * 2^q for every value below budget, then budget itself.
  static Schedule geometric(std::int64_t budget, std::int64_t base = 1000);

  const std::vector<std::int64_t>& cutoffs() const { return cutoffs_; }
  std::size_t size() const { return cutoffs_.size(); }
  std::int64_t top() const { return cutoffs_.back(); }
  std::int64_t operator[](std::size_t q) const { return cutoffs_[q]; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<std::int64_t> cutoffs_;
};

struct CorrelationProfile {
  std::int64_t H = 0;
  Schedule schedule;
  /// gammas[q][h] = (1/N_q) sum_{n<=N_q} <f_{n+h}, g_n>, h = 0..H.
  std::vector<std::vector<Complex>> gammas;
  /// max_h |gamma_{N_Q}(h) - gamma_{N_{Q-1}}(h)|.
  double stability = 0.0;

  const std::vector<Complex>& top() const { return gammas.back(); }
};

/// Largest lag allowed for a schedule: floor(sqrt(N_Q)).
std::int64_t default_lag_budget(const Schedule& schedule);

/// Auto-correlation profile of an orbit. H < 0 selects default_lag_budget.
/// Throws DomainError if H exceeds floor(sqrt(N_Q)).
CorrelationProfile cesaro_correlation(const Orbit& f, std::int64_t H, const Schedule& schedule);
/// Cross-correlation (1/N) sum <f_{n+h}, g_n>.
CorrelationProfile cross_correlation(const Orbit& f, const Orbit& g, std::int64_t H, const Schedule& schedule);

/// ||(1/N) sum_{n<=N} c_n f_n|| for each cutoff, accumulating coefficients per index.
std::vector<double> averaged_norm(const Orbit& f, const Weights& c, const Schedule& schedule);

/// (1/N) sum_{n<=N} f_n as explicit trigonometric polynomials, one per cutoff.
std::vector<CharVector> orbit_average(const Orbit& f, const Schedule& schedule);

struct ProductFactor {
  AffineSystem T;
  IntegerSequenceSpec exponent;
  CharVector f;
};

/// (1/N) sum_n prod_j f_j o T_j^{s_j(n)} for each cutoff.
std::vector<CharVector> product_average(const std::vector<ProductFactor>& factors, const Schedule& schedule);

/// Arc [lo, lo + width) of the circle; full covers everything.
struct Arc {
  Turns lo = 0;
  Turns width = 0;
  bool full = false;

  static Arc whole() { return {0, 0, true}; }
  /// [a, b) for rationals 0 <= b - a <= 1, wrapping mod 1.
  static Arc from_rationals(const Rational& a, const Rational& b);
  bool contains(Turns x) const { return full || x - lo < width; }
  double length() const;
};

/// Axis-aligned box in T^d (one arc per coordinate).
struct Box {
  std::vector<Arc> sides;
};

/// Finite union of boxes.
using BoxUnion = std::vector<Box>;

struct BoxConstraint {
  AffineSystem T;
  std::int64_t n = 0;
  BoxUnion A;
};

struct GridMeasure {
  double value = 0.0;
  /// Fraction of cells crossed by some preimage boundary; the exact measure
  /// lies within value +- error_bound.
  double error_bound = 0.0;
  std::uint64_t survivors = 0;
  std::uint64_t cells = 0;
  std::int64_t M = 0;
};

/// Midpoint-grid estimate of mu(cap_i T_i^{-n_i} A_i) with M^d cells, each
/// image computed exactly in fixed point. Throws ResolutionError (carrying
/// the required M) when the error bound would exceed max_error.
GridMeasure box_measure(const std::vector<BoxConstraint>& sets, std::int64_t M,
                        double max_error = std::numeric_limits<double>::infinity(), unsigned threads = 1);

/// Exact mu(cap_i T_i^{-n_i} A_i) when every T_i is a rotation and every A_i
/// a single box: product over coordinates of circular arc intersections.
double interval_measure_exact(const std::vector<BoxConstraint>& sets);

}  // namespace vdclab
