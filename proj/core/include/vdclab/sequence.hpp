#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vdclab/fixed_point.hpp"
#include "vdclab/phase.hpp"

namespace vdclab {

/// An integer sequence k_1, k_2, ... described symbolically.
///
/// polynomial: integer-valued polynomial stored in the binomial basis,
///   k_n = sum_j a_j C(n, j), so every intermediate value is an integer.
/// floor_power: k_n = floor(n^c) for a real exponent c > 0 pinned to 128
///   fractional bits; evaluation is certified by interval rounding.
/// table: an explicit finite list k_1..k_L.
/// difference: k'_n = base_{n+h} - base_n for a non-polynomial base.
class IntegerSequenceSpec {
 public:
  enum class Kind { polynomial, floor_power, table, difference };

  IntegerSequenceSpec() : IntegerSequenceSpec(polynomial_binomial({0})) {}

  static IntegerSequenceSpec polynomial_binomial(std::vector<i128> coeffs);
  /// Monomial coefficients c_0 + c_1 n + ...; DomainError unless integer-valued.
  static IntegerSequenceSpec polynomial_monomial(const std::vector<Rational>& coeffs);
  /// c = integer_part + fraction; fraction in 2^-128 units.
  static IntegerSequenceSpec floor_power(std::int64_t integer_part, Turns fraction);
  static IntegerSequenceSpec floor_power(std::string_view exponent);
  static IntegerSequenceSpec table(std::vector<i128> values);
  static IntegerSequenceSpec identity() { return polynomial_binomial({0, 1}); }
  static IntegerSequenceSpec constant(i128 c) { return polynomial_binomial({c}); }

  Kind kind() const { return kind_; }
  const std::vector<i128>& binomial_coeffs() const { return coeffs_; }  // polynomial
  /// Monomial coefficients (exact rationals) of a polynomial spec.
  std::vector<Rational> monomial_coeffs() const;
  std::int64_t degree() const;                                         // polynomial; -1 for zero
  std::int64_t exponent_integer_part() const { return c_int_; }       // floor_power
  Turns exponent_fraction() const { return c_frac_; }                  // floor_power
  double exponent() const;
  const std::vector<i128>& table_values() const { return coeffs_; }    // table
  const IntegerSequenceSpec& base() const { return *base_; }           // difference
  std::int64_t lag() const { return lag_; }                            // difference

  std::string describe() const;

  friend bool operator==(const IntegerSequenceSpec& a, const IntegerSequenceSpec& b);

 private:
  explicit IntegerSequenceSpec(Kind kind) : kind_(kind) {}
  friend IntegerSequenceSpec diff_profile(const IntegerSequenceSpec& spec, std::int64_t h);
  Kind kind_ = Kind::polynomial;
  std::vector<i128> coeffs_;
  std::int64_t c_int_ = 0;
  Turns c_frac_ = 0;
  std::shared_ptr<const IntegerSequenceSpec> base_;
  std::int64_t lag_ = 0;
};

struct SeqSample {
  i128 value = 0;
  /// floor_power only: n^c lies within 2^-64 of an integer (or the certified
  /// enclosure straddles one), so the floor is reported but not trusted.
  bool ambiguous = false;
};

/// Exact k_n, n >= 1. Throws OverflowError, DomainError (table out of range).
SeqSample seq_eval_checked(const IntegerSequenceSpec& spec, std::int64_t n);
/// As seq_eval_checked; an ambiguous floor throws DomainError.
i128 seq_eval(const IntegerSequenceSpec& spec, std::int64_t n);

/// k_{n+h} - k_n. Polynomial specs stay polynomial (degree drops by one);
/// tables shrink by h; floor powers become a lazy difference view.
IntegerSequenceSpec diff_profile(const IntegerSequenceSpec& spec, std::int64_t h);

/// Evaluates an integer-valued polynomial at integer n through the binomial basis.
i128 binomial_eval(const std::vector<i128>& coeffs, i128 n);

}  // namespace vdclab
