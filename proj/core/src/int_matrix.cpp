#include "vdclab/int_matrix.hpp"

#include "vdclab/checked.hpp"
#include "vdclab/error.hpp"

namespace vdclab {

IntMatrix IntMatrix::identity(std::size_t d) {
  IntMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  IntMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw DomainError("matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<std::int64_t>> IntMatrix::rows() const {
  std::vector<std::vector<std::int64_t>> out(d_, std::vector<std::int64_t>(d_));
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::optional<IntMatrix> IntMatrix::try_mul(const IntMatrix& other) const {
  if (other.d_ != d_) throw DomainError("matrix dimension mismatch");
  IntMatrix out(d_);
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j < d_; ++j) {
      i128 acc = 0;
      for (std::size_t k = 0; k < d_; ++k) {
        i128 prod;
        if (__builtin_mul_overflow(static_cast<i128>((*this)(i, k)), static_cast<i128>(other(k, j)), &prod) ||
            __builtin_add_overflow(acc, prod, &acc)) {
          return std::nullopt;
        }
      }
      if (acc > INT64_MAX || acc < INT64_MIN) return std::nullopt;
      out(i, j) = static_cast<std::int64_t>(acc);
    }
  }
  return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  auto r = try_mul(other);
  if (!r) throw OverflowError("integer matrix product leaves 64 bits");
  return *r;
}

std::optional<IntMatrix> IntMatrix::try_power(std::int64_t n) const {
  if (n < 0) throw DomainError("try_power expects n >= 0");
  IntMatrix result = identity(d_);
  IntMatrix base = *this;
  auto e = static_cast<std::uint64_t>(n);
  while (e != 0) {
    if (e & 1) {
      auto r = result.try_mul(base);
      if (!r) return std::nullopt;
      result = std::move(*r);
    }
    e >>= 1;
    if (e != 0) {
      auto b = base.try_mul(base);
      if (!b) return std::nullopt;
      base = std::move(*b);
    }
  }
  return result;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(d_);
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

BigInt IntMatrix::det() const {
  // Bareiss fraction-free elimination.
  if (d_ == 0) return 1;
  std::vector<BigInt> m(a_.begin(), a_.end());
  auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * d_ + j]; };
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < d_; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < d_ && at(swap, k) == 0) ++swap;
      if (swap == d_) return 0;
      for (std::size_t j = 0; j < d_; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d_; ++i) {
      for (std::size_t j = k + 1; j < d_; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(d_ - 1, d_ - 1);
}

bool IntMatrix::is_unimodular() const {
  const BigInt d = det();
  return d == 1 || d == -1;
}

IntMatrix IntMatrix::inverse() const {
  const BigInt det_value = det();
  if (det_value != 1 && det_value != -1) throw DomainError("matrix is not unimodular (det != +-1)");
  const std::int64_t s = det_value == 1 ? 1 : -1;
  IntMatrix out(d_);
  if (d_ == 1) {
    out(0, 0) = s;
    return out;
  }
  // adj(A)_{ji} = (-1)^{i+j} minor_{ij}; inverse = adj / det.
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j < d_; ++j) {
      IntMatrix minor(d_ - 1);
      for (std::size_t r = 0, rr = 0; r < d_; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, cc = 0; c < d_; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = (*this)(r, c);
        }
        ++rr;
      }
      BigInt cof = minor.det();
      if ((i + j) % 2 == 1) cof = -cof;
      cof *= s;
      if (cof > INT64_MAX || cof < INT64_MIN) throw OverflowError("matrix inverse leaves 64 bits");
      out(j, i) = static_cast<std::int64_t>(cof);
    }
  }
  return out;
}

bool IntMatrix::is_identity() const { return *this == identity(d_); }

bool IntMatrix::commutes_with(const IntMatrix& other) const {
  BigMatrix a(*this);
  BigMatrix b(other);
  const BigMatrix ab = a * b;
  const BigMatrix ba = b * a;
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j)
      if (ab(i, j) != ba(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------- BigMatrix

BigMatrix::BigMatrix(const IntMatrix& m) : d_(m.dim()), a_(m.dim() * m.dim()) {
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) a_[i * d_ + j] = m(i, j);
}

BigMatrix BigMatrix::identity(std::size_t d) { return BigMatrix(IntMatrix::identity(d)); }

BigMatrix BigMatrix::operator*(const BigMatrix& other) const {
  BigMatrix out;
  out.d_ = d_;
  out.a_.assign(d_ * d_, BigInt{0});
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t k = 0; k < d_; ++k) {
      const BigInt& lhs = a_[i * d_ + k];
      if (lhs == 0) continue;
      for (std::size_t j = 0; j < d_; ++j) out.a_[i * d_ + j] += lhs * other.a_[k * d_ + j];
    }
  return out;
}

std::size_t BigMatrix::max_bits() const {
  std::size_t bits = 0;
  for (const auto& v : a_) {
    if (v != 0) bits = std::max<std::size_t>(bits, boost::multiprecision::msb(abs(v)) + 1);
  }
  return bits;
}

std::optional<BigMatrix> BigMatrix::power(std::uint64_t n, std::size_t max_bits) const {
  BigMatrix result = identity(d_);
  BigMatrix base = *this;
  while (n != 0) {
    if (n & 1) {
      result = result * base;
      if (result.max_bits() > max_bits) return std::nullopt;
    }
    n >>= 1;
    if (n != 0) {
      base = base * base;
      if (base.max_bits() > max_bits) return std::nullopt;
    }
  }
  return result;
}

std::vector<BigInt> BigMatrix::apply(std::span<const BigInt> v) const {
  std::vector<BigInt> out(d_, BigInt{0});
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) out[i] += a_[i * d_ + j] * v[j];
  return out;
}

}  // namespace vdclab
