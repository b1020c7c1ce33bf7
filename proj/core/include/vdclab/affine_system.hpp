#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vdclab/char_vector.hpp"
#include "vdclab/int_matrix.hpp"
#include "vdclab/phase.hpp"

namespace vdclab {

/// Measure-preserving affine map x -> A x + b of T^d, with A unimodular and
/// b a vector of formal phases.
class AffineSystem {
 public:
  AffineSystem() = default;
  /// Throws DomainError unless |det A| = 1 and dimensions agree.
  AffineSystem(IntMatrix A, std::vector<Phase> b, std::string label = {});

  static AffineSystem identity(std::size_t d);
  static AffineSystem rotation(std::vector<Phase> b, std::string label = {});
  /// (x, y) -> (x + shift, y + x).
  static AffineSystem skew_product(Phase shift, std::string label = {});
  /// Block-diagonal product acting on T^{d1+d2}.
  static AffineSystem product(const AffineSystem& first, const AffineSystem& second);

  std::size_t dim() const { return A_.dim(); }
  const IntMatrix& matrix() const { return A_; }
  const std::vector<Phase>& translation() const { return b_; }
  const std::string& label() const { return label_; }
  bool has_zero_translation() const;
  bool is_rotation() const { return A_.is_identity(); }

  /// (this o other)(x) = A (A' x + b') + b.
  AffineSystem compose(const AffineSystem& other) const;
  AffineSystem inverse() const;
  bool commutes_with(const AffineSystem& other) const;

  /// Image of a point given as fixed-point turns; exact mod 2^-128.
  std::vector<Turns> apply(std::span<const Turns> x) const;

  friend bool operator==(const AffineSystem& a, const AffineSystem& b) { return a.A_ == b.A_ && a.b_ == b.b_; }

 private:
  IntMatrix A_;
  std::vector<Phase> b_;
  std::string label_;
};

/// T^n in closed form: (A^n, sum_{j<n} A^j b). Throws OverflowError naming
/// the offending multiplier when a matrix entry or phase coefficient leaves
/// its exact range.
AffineSystem system_power(const AffineSystem& T, std::int64_t n);

/// Translation part of T^n only; cheaper than system_power when b = 0.
std::vector<Phase> translation_power(const AffineSystem& T, std::int64_t n);

/// The Koopman image f o T^n: e_m -> exp(2 pi i m.b_n) e_{(A^T)^n m}.
CharVector pushforward(const AffineSystem& T, const CharVector& f, std::int64_t n);

/// Exact phase m.b of a character under a translation vector. Requires an
/// exact index; an index that is residue-only needs b = 0.
Turns character_phase_turns(const CharIndex& m, std::span<const Phase> b);
/// Formal phase m.b; requires a 64-bit index.
Phase character_phase(const CharIndex& m, std::span<const Phase> b);

/// Orthogonal projection onto T-invariant functions (conditional expectation
/// on the invariant factor). A character orbit contributes its cycle average
/// when the cycle is finite and its accumulated phase is exactly 0 mod 1;
/// infinite orbits and non-trivial cycle phases contribute nothing.
CharVector invariant_projection(const AffineSystem& T, const CharVector& f);

/// Largest possible period of a finite character orbit under a d x d
/// unimodular matrix (lcm of all element orders in GL_d(Z)).
std::uint64_t finite_orbit_period_bound(std::size_t d);

/// Orbit-length cap and growth cap used by invariant_projection.
inline constexpr std::size_t kOrbitIterationCap = 10000;
inline constexpr std::size_t kOrbitNormBitsCap = 200;

}  // namespace vdclab
