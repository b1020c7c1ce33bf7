#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vdclab/char_index.hpp"

namespace vdclab {

/// Small dense square integer matrix with overflow-checked arithmetic.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t d) : d_(d), a_(d * d, 0) {}
  static IntMatrix identity(std::size_t d);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t dim() const { return d_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  std::vector<std::vector<std::int64_t>> rows() const;

  /// Throws OverflowError.
  IntMatrix operator*(const IntMatrix& other) const;
  std::optional<IntMatrix> try_mul(const IntMatrix& other) const;
  /// nullopt when an entry leaves 64 bits; n >= 0.
  std::optional<IntMatrix> try_power(std::int64_t n) const;

  IntMatrix transpose() const;
  BigInt det() const;
  bool is_unimodular() const;
  /// Integer inverse of a unimodular matrix; throws DomainError otherwise.
  IntMatrix inverse() const;
  bool is_identity() const;
  bool commutes_with(const IntMatrix& other) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<std::int64_t> a_;
};

/// Square matrix over BigInt, for exact powers of hyperbolic matrices.
class BigMatrix {
 public:
  explicit BigMatrix(const IntMatrix& m);
  static BigMatrix identity(std::size_t d);
  std::size_t dim() const { return d_; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
  BigMatrix operator*(const BigMatrix& other) const;
  /// M^n; nullopt as soon as an entry exceeds max_bits.
  std::optional<BigMatrix> power(std::uint64_t n, std::size_t max_bits) const;
  std::vector<BigInt> apply(std::span<const BigInt> v) const;
  std::size_t max_bits() const;

 private:
  BigMatrix() = default;
  std::size_t d_ = 0;
  std::vector<BigInt> a_;
};

}  // namespace vdclab
