#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <boost/container/small_vector.hpp>

#include "vdclab/fixed_point.hpp"

namespace vdclab {

namespace detail {
struct Symbol;
}

/// A named irrational number pinned to a 128-bit truncation of [0,1).
/// Symbols are formal: distinct labels are treated as rationally independent
/// of each other and of 1. Handles are interned and compare by identity.
class Irrational {
 public:
  static Irrational make(std::string_view label, Turns value);

  const std::string& label() const;
  Turns value() const;

  friend bool operator==(Irrational a, Irrational b) { return a.sym_ == b.sym_; }
  friend std::strong_ordering operator<=>(Irrational a, Irrational b);

 private:
  explicit Irrational(const detail::Symbol* sym) : sym_(sym) {}
  const detail::Symbol* sym_;
};

/// sqrt(2)-1, (sqrt(5)-1)/2, sqrt(3)-1 under the labels alpha/beta/gamma.
Irrational zoo_alpha();
Irrational zoo_beta();
Irrational zoo_gamma();

/// Lookup table used when parsing phase expressions.
using SymbolTable = std::map<std::string, Irrational, std::less<>>;

/// Exact rational number num/den with den > 0 and gcd(num, den) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(i128 num, i128 den);
  static Rational parse(std::string_view text);
  std::string to_string() const;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);

/// A formal element of R/Z: an integer combination of Irrationals plus a
/// rational, reduced mod 1. Equality and is_zero() are exact.
class Phase {
 public:
  using Term = std::pair<Irrational, i128>;
  using Terms = boost::container::small_vector<Term, 2>;

  Phase() = default;
  static Phase rational(std::int64_t num, std::int64_t den);
  static Phase of(Irrational x, i128 coeff = 1);
  /// "alpha", "1/2+2*alpha", "-beta + 3/4", "0".
  static Phase parse(std::string_view text, const SymbolTable& symbols);

  Phase operator+(const Phase& other) const;
  Phase operator-(const Phase& other) const;
  Phase operator-() const;
  Phase& operator+=(const Phase& other);
  /// k * phase; throws OverflowError naming the multiplier when a coefficient leaves 128 bits.
  Phase scaled(i128 k) const;

  bool is_zero() const { return num_ == 0 && terms_.empty(); }
  bool has_irrational_part() const { return !terms_.empty(); }
  /// True when the phase is p/q with no irrational part; q is the order as a root of unity.
  std::int64_t rational_den() const { return den_; }
  std::int64_t rational_num() const { return num_; }
  const Terms& terms() const { return terms_; }

  /// Value mod 1 evaluated with the pinned truncations.
  Turns turns() const;
  std::complex<double> unit() const { return unit_phase(turns()); }
  std::string to_string() const;

  friend bool operator==(const Phase& a, const Phase& b);

 private:
  std::int64_t num_ = 0;  // 0 <= num_ < den_
  std::int64_t den_ = 1;
  Terms terms_;           // sorted by symbol, nonzero coefficients
  void add_term(Irrational x, i128 c);
};

}  // namespace vdclab
