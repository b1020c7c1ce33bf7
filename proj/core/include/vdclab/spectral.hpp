#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdclab/correlate.hpp"
#include "vdclab/phase.hpp"

namespace vdclab {

struct Thresholds {
  double w_tol = 0.02;          // Wiener statistic below this: no atoms
  double l2_eps_rel = 0.02;     // top-octave increment of sum |gamma|^2 below l2_eps_rel * gamma(0)^2
  double s_tol = 0.05;          // relative tolerance on atomic / continuous mass
  double tol_neg = 1e-8;        // allowed negative Fejer density
  double tol_int = 1e-10;       // allowed error of the density integral
  double atom_min_rel = 0.02;   // atoms lighter than this * gamma(0) are not reported
  double stability_factor = 10; // profiles with stability > factor * w_tol are refused
  std::int64_t H = 4096;
  std::int64_t G = 8192;
  std::int64_t lattice_K = 8;   // candidate atoms sum k_i x_i with sum |k_i| <= K
  std::int64_t rational_den = 12;

  double stability_limit() const { return stability_factor * w_tol; }
  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct AtomCandidate {
  Turns location = 0;
  std::string label;
};

struct Atom {
  Turns location = 0;
  std::string label;
  double mass = 0.0;
  double imag_residue = 0.0;
};

/// Candidate lattice: integer combinations of the given irrationals with
/// sum |k_i| <= K, and every rational p/q with q <= D; duplicates removed.
std::vector<AtomCandidate> atom_lattice(const std::vector<Irrational>& irrationals, std::int64_t K, std::int64_t D);

/// Fejer sum sigma(j/G) = sum_{|h|<=H} (1 - |h|/(H+1)) gamma(h) e(-h j / G),
/// gamma(-h) = conj gamma(h). The sign matches atom_scan, so gamma(h) = e(h a)
/// puts both the density peak and the atom at a. Returns the real part; the largest imaginary
/// part is written to imag_residue when given.
std::vector<double> fejer_density(const std::vector<Complex>& gamma, std::int64_t G, double* imag_residue = nullptr);
/// Profile overload; throws UnstableProfileError beyond the stability limit.
std::vector<double> fejer_density(const CorrelationProfile& profile, std::int64_t G, const Thresholds& t = {});

/// mass(a) = Re (1/H) sum_{h=1}^H gamma(h) e(-h a).
std::vector<Atom> atom_scan(const std::vector<Complex>& gamma, const std::vector<AtomCandidate>& candidates);

/// (1/(2H+1)) sum_{|h|<=H} |gamma(h)|^2.
double wiener_statistic(const std::vector<Complex>& gamma);

struct L2Tail {
  /// partial[k] = sum_{h=1}^k |gamma(h)|^2, partial[0] = 0.
  std::vector<double> partial;
  /// partial[H] - partial[H/2].
  double top_increment = 0.0;
  /// Least-squares slope of log |gamma(h)|^2 against log h on the top
  /// octave; absent when some increment there vanishes.
  std::optional<double> increment_slope;
  /// Slope of log partial sums over the top octave; absent when they vanish.
  std::optional<double> partial_slope;
};

L2Tail l2_tail(const std::vector<Complex>& gamma);

enum class SpectralTag { lebesgue, singular, mixed, inconclusive };
std::string to_string(SpectralTag tag);

struct SpectralEstimate {
  SpectralTag tag = SpectralTag::inconclusive;
  std::string reason;
  std::int64_t H = 0;
  double gamma0 = 0.0;
  double stability = 0.0;
  std::vector<Atom> atoms;  // masses >= atom_min_rel * gamma0
  double atomic_mass = 0.0;
  double wiener = 0.0;
  L2Tail l2;
  /// l2 tail of gamma with the reported atoms removed.
  double residual_top_increment = 0.0;
  std::vector<double> density;
  double density_min = 0.0;
  double density_integral = 0.0;
  double density_imag_residue = 0.0;
  Thresholds thresholds;
};

/// Lebesgue: no atoms, small Wiener statistic, l2-summable tail.
/// Singular: atoms carry (1 - s_tol) of gamma(0).
/// Mixed: atoms and an l2-summable remainder each carry at least s_tol of gamma(0).
/// Anything else, or an unstable profile, is inconclusive.
SpectralEstimate classify(const CorrelationProfile& profile, const Thresholds& t,
                          const std::vector<AtomCandidate>& candidates);

struct PolarizationResult {
  std::vector<Complex> direct;     // (1/N) sum <f_{n+h}, g_n>
  std::vector<Complex> polarized;  // 1/4 sum_a a gamma_{f+ag}(h), a in {1,-1,i,-i}
  double max_discrepancy = 0.0;
  double max_stability = 0.0;
};

/// Throws UnstableProfileError if a polarized profile is beyond the stability limit.
PolarizationResult cross_spectrum_polarization(const OrbitPtr& f, const OrbitPtr& g, std::int64_t H,
                                               const Schedule& schedule, const Thresholds& t = {});

/// Smallest eigenvalue of the Hermitian Toeplitz matrix [gamma(i-j)] on the
/// leading min(H+1, max_size) lags.
double toeplitz_min_eigenvalue(const std::vector<Complex>& gamma, std::size_t max_size = 512);

}  // namespace vdclab
