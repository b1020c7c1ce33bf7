#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "vdclab/fixed_point.hpp"

namespace vdclab {

using BigInt = boost::multiprecision::cpp_int;

/// Three distinct 61-bit primes. Every CharIndex carries its components
/// reduced modulo each of them; indices from different sets never mix.
struct PrimeSet {
  std::array<std::uint64_t, 3> p;
  std::string name;

  static const PrimeSet& primary();
  /// Disjoint from primary(); used to audit fingerprint equality.
  static const PrimeSet& audit();
};

class IntMatrix;

/// Exponent vector m of the character e_m(x) = exp(2 pi i m.x) on T^d.
///
/// Three representations share one interface: exact 64-bit components,
/// exact arbitrary-precision components, and residue-only (modular
/// fingerprints, used once components outgrow the exact bit budget).
/// Equality and hashing go through the fingerprints, so all three compare
/// in O(d).
class CharIndex {
 public:
  enum class Rep : std::uint8_t { small, big, residue };

  /// Exact components beyond this many bits degrade to residue-only.
  static constexpr std::size_t kExactBitBudget = 4096;

  CharIndex() = default;
  explicit CharIndex(std::span<const std::int64_t> m, const PrimeSet& primes = PrimeSet::primary());
  CharIndex(std::initializer_list<std::int64_t> m, const PrimeSet& primes = PrimeSet::primary());
  static CharIndex from_big(std::span<const BigInt> m, const PrimeSet& primes = PrimeSet::primary());
  static CharIndex zero(std::size_t dim, const PrimeSet& primes = PrimeSet::primary());

  std::size_t dim() const { return dim_; }
  Rep rep() const { return rep_; }
  bool exact() const { return rep_ != Rep::residue; }
  bool is_zero() const;
  const PrimeSet& primes() const { return *primes_; }

  /// Requires rep() == small.
  std::span<const std::int64_t> small() const { return {small_.data(), small_.size()}; }
  /// Requires exact().
  std::vector<BigInt> big() const;
  /// Bits of the largest component magnitude; requires exact().
  std::size_t max_bits() const;

  std::uint64_t residue(std::size_t prime, std::size_t component) const { return res_[prime * dim_ + component]; }

  CharIndex operator+(const CharIndex& other) const;
  CharIndex operator-() const;
  CharIndex operator-(const CharIndex& other) const { return *this + (-other); }

  /// M^n m for a unimodular integer matrix (n may be negative).
  CharIndex transformed(const IntMatrix& M, std::int64_t n = 1) const;

  std::size_t hash() const { return hash_; }
  std::string to_string() const;

  friend bool operator==(const CharIndex& a, const CharIndex& b);
  /// Total order on fingerprints; consistent with ==.
  friend std::strong_ordering operator<=>(const CharIndex& a, const CharIndex& b);

 private:
  void finish();  // fills hash_

  const PrimeSet* primes_ = &PrimeSet::primary();
  std::uint32_t dim_ = 0;
  Rep rep_ = Rep::small;
  std::size_t hash_ = 0;
  boost::container::small_vector<std::int64_t, 4> small_;
  std::shared_ptr<const std::vector<BigInt>> big_;
  boost::container::small_vector<std::uint64_t, 12> res_;
};

struct CharIndexHash {
  std::size_t operator()(const CharIndex& m) const { return m.hash(); }
};

}  // namespace vdclab
