#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vdclab/char_index.hpp"

namespace vdclab {

using Complex = std::complex<double>;

/// Finite trigonometric polynomial sum_m c_m e_m on T^d. Terms are kept
/// sorted by CharIndex order with no exact-zero amplitudes, so two vectors
/// with the same support compare term by term.
class CharVector {
 public:
  using Term = std::pair<CharIndex, Complex>;

  CharVector() = default;
  static CharVector character(CharIndex m, Complex c = 1.0);
  /// Merges duplicate indices and drops exact zeros.
  static CharVector from_terms(std::vector<Term> terms);
  /// The constant function c on T^dim.
  static CharVector constant(std::size_t dim, Complex c = 1.0, const PrimeSet& primes = PrimeSet::primary());

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Complex coeff(const CharIndex& m) const;
  /// Integral over the torus: the e_0 coefficient.
  Complex mean() const;
  double norm2() const;
  double norm() const;

  CharVector scaled(Complex c) const;
  CharVector conj() const;
  /// Drops amplitudes with |c| <= eps.
  CharVector pruned(double eps) const;

  std::string to_string() const;

  friend bool operator==(const CharVector&, const CharVector&) = default;

 private:
  std::vector<Term> terms_;
};

/// sum_m u_m conj(v_m).
Complex char_inner(const CharVector& u, const CharVector& v);
/// sum_k a_k u_k with zero pruning.
CharVector char_combine(std::span<const std::pair<Complex, CharVector>> terms);
CharVector operator+(const CharVector& u, const CharVector& v);
CharVector operator-(const CharVector& u, const CharVector& v);
/// Pointwise product: coefficient convolution, indices add.
CharVector char_mul(const CharVector& u, const CharVector& v);

}  // namespace vdclab
