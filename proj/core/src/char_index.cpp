#include "vdclab/char_index.hpp"

#include <algorithm>

#include "vdclab/error.hpp"
#include "vdclab/int_matrix.hpp"

namespace vdclab {
namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<u128>(a) * b) % p); }
u64 addmod(u64 a, u64 b, u64 p) {
  const u64 s = a + b;  // a, b < 2^61: no wrap
  return s >= p ? s - p : s;
}

u64 reduce_i64(std::int64_t v, u64 p) {
  const i128 r = static_cast<i128>(v) % static_cast<i128>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(p) : r);
}

u64 reduce_big(const BigInt& v, u64 p) {
  BigInt r = v % p;
  if (r < 0) r += p;
  return static_cast<u64>(r);
}

u64 splitmix(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using ModMatrix = std::vector<u64>;

ModMatrix mod_mul(const ModMatrix& a, const ModMatrix& b, std::size_t d, u64 p) {
  ModMatrix out(d * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const u64 lhs = a[i * d + k];
      if (lhs == 0) continue;
      for (std::size_t j = 0; j < d; ++j) out[i * d + j] = addmod(out[i * d + j], mulmod(lhs, b[k * d + j], p), p);
    }
  return out;
}

ModMatrix mod_power(const IntMatrix& m, std::uint64_t n, u64 p) {
  const std::size_t d = m.dim();
  ModMatrix base(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) base[i * d + j] = reduce_i64(m(i, j), p);
  ModMatrix result(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) result[i * d + i] = 1;
  while (n != 0) {
    if (n & 1) result = mod_mul(result, base, d, p);
    n >>= 1;
    if (n != 0) base = mod_mul(base, base, d, p);
  }
  return result;
}

std::size_t bits_of(std::int64_t v) {
  const u64 mag = v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
  return mag == 0 ? 0 : 64 - static_cast<std::size_t>(__builtin_clzll(mag));
}

}  // namespace

const PrimeSet& PrimeSet::primary() {
  static const PrimeSet set{{2305843009213693951ULL, 2305843009213693921ULL, 2305843009213693907ULL}, "primary"};
  return set;
}

const PrimeSet& PrimeSet::audit() {
  static const PrimeSet set{{2305843009213693723ULL, 2305843009213693693ULL, 2305843009213693669ULL}, "audit"};
  return set;
}

CharIndex::CharIndex(std::span<const std::int64_t> m, const PrimeSet& primes)
    : primes_(&primes), dim_(static_cast<std::uint32_t>(m.size())), rep_(Rep::small), small_(m.begin(), m.end()) {
  res_.resize(3 * dim_);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < dim_; ++i) res_[k * dim_ + i] = reduce_i64(m[i], primes.p[k]);
  finish();
}

CharIndex::CharIndex(std::initializer_list<std::int64_t> m, const PrimeSet& primes)
    : CharIndex(std::span<const std::int64_t>(m.begin(), m.size()), primes) {}

CharIndex CharIndex::from_big(std::span<const BigInt> m, const PrimeSet& primes) {
  const bool fits = std::all_of(m.begin(), m.end(), [](const BigInt& v) { return v >= INT64_MIN && v <= INT64_MAX; });
  if (fits) {
    std::vector<std::int64_t> s;
    s.reserve(m.size());
    for (const auto& v : m) s.push_back(static_cast<std::int64_t>(v));
    return CharIndex(s, primes);
  }
  CharIndex out;
  out.primes_ = &primes;
  out.dim_ = static_cast<std::uint32_t>(m.size());
  out.rep_ = Rep::big;
  out.big_ = std::make_shared<const std::vector<BigInt>>(m.begin(), m.end());
  out.res_.resize(3 * out.dim_);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < out.dim_; ++i) out.res_[k * out.dim_ + i] = reduce_big(m[i], primes.p[k]);
  out.finish();
  return out;
}

CharIndex CharIndex::zero(std::size_t dim, const PrimeSet& primes) {
  std::vector<std::int64_t> z(dim, 0);
  return CharIndex(z, primes);
}

void CharIndex::finish() {
  u64 h = splitmix(dim_);
  for (u64 r : res_) h = splitmix(h ^ r);
  hash_ = static_cast<std::size_t>(h);
}

bool CharIndex::is_zero() const {
  return std::all_of(res_.begin(), res_.end(), [](u64 r) { return r == 0; });
}

std::vector<BigInt> CharIndex::big() const {
  switch (rep_) {
    case Rep::small: return std::vector<BigInt>(small_.begin(), small_.end());
    case Rep::big: return *big_;
    case Rep::residue: break;
  }
  throw DomainError("character index is residue-only; exact components were not retained");
}

std::size_t CharIndex::max_bits() const {
  std::size_t bits = 0;
  if (rep_ == Rep::small) {
    for (auto v : small_) bits = std::max(bits, bits_of(v));
    return bits;
  }
  for (const auto& v : big()) {
    if (v != 0) bits = std::max<std::size_t>(bits, boost::multiprecision::msb(abs(v)) + 1);
  }
  return bits;
}

CharIndex CharIndex::operator+(const CharIndex& other) const {
  if (dim_ != other.dim_) throw DomainError("character index dimension mismatch");
  if (primes_ != other.primes_) throw DomainError("character indices carry different prime sets");
  if (rep_ == Rep::small && other.rep_ == Rep::small) {
    boost::container::small_vector<std::int64_t, 4> sum(dim_);
    bool ok = true;
    for (std::size_t i = 0; i < dim_ && ok; ++i) ok = !__builtin_add_overflow(small_[i], other.small_[i], &sum[i]);
    if (ok) {
      CharIndex out;
      out.primes_ = primes_;
      out.dim_ = dim_;
      out.rep_ = Rep::small;
      out.small_ = std::move(sum);
      out.res_.resize(res_.size());
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < dim_; ++i)
          out.res_[k * dim_ + i] = addmod(res_[k * dim_ + i], other.res_[k * dim_ + i], primes_->p[k]);
      out.finish();
      return out;
    }
  }
  if (exact() && other.exact()) {
    auto a = big();
    const auto b = other.big();
    for (std::size_t i = 0; i < dim_; ++i) a[i] += b[i];
    return from_big(a, *primes_);
  }
  CharIndex out;
  out.primes_ = primes_;
  out.dim_ = dim_;
  out.rep_ = Rep::residue;
  out.res_.resize(res_.size());
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < dim_; ++i)
      out.res_[k * dim_ + i] = addmod(res_[k * dim_ + i], other.res_[k * dim_ + i], primes_->p[k]);
  out.finish();
  return out;
}

CharIndex CharIndex::operator-() const {
  if (rep_ == Rep::small && std::none_of(small_.begin(), small_.end(), [](auto v) { return v == INT64_MIN; })) {
    std::vector<std::int64_t> neg(small_.begin(), small_.end());
    for (auto& v : neg) v = -v;
    return CharIndex(neg, *primes_);
  }
  if (exact()) {
    auto v = big();
    for (auto& x : v) x = -x;
    return from_big(v, *primes_);
  }
  CharIndex out = *this;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < dim_; ++i) {
      auto& r = out.res_[k * dim_ + i];
      r = r == 0 ? 0 : primes_->p[k] - r;
    }
  out.finish();
  return out;
}

CharIndex CharIndex::transformed(const IntMatrix& M, std::int64_t n) const {
  if (M.dim() != dim_) throw DomainError("matrix/index dimension mismatch");
  if (n == 0) return *this;
  if (n == 1 && rep_ == Rep::small) {
    // Single step, the common case when orbits are walked one iterate at a time.
    boost::container::small_vector<std::int64_t, 4> out(dim_);
    bool ok = true;
    for (std::size_t i = 0; i < dim_ && ok; ++i) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < dim_ && ok; ++j) {
        std::int64_t prod;
        ok = !__builtin_mul_overflow(M(i, j), small_[j], &prod) && !__builtin_add_overflow(acc, prod, &acc);
      }
      out[i] = acc;
    }
    if (ok) return CharIndex(std::span<const std::int64_t>(out.data(), out.size()), *primes_);
  }
  const IntMatrix base = n > 0 ? M : M.inverse();
  const std::uint64_t k = n > 0 ? static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(-(n + 1)) + 1;

  if (rep_ == Rep::small && k <= static_cast<std::uint64_t>(INT64_MAX)) {
    if (auto P = base.try_power(static_cast<std::int64_t>(k))) {
      bool small_ok = true;
      std::vector<std::int64_t> out(dim_);
      for (std::size_t i = 0; i < dim_ && small_ok; ++i) {
        i128 acc = 0;
        for (std::size_t j = 0; j < dim_; ++j) {
          i128 prod;
          if (__builtin_mul_overflow(static_cast<i128>((*P)(i, j)), static_cast<i128>(small_[j]), &prod) ||
              __builtin_add_overflow(acc, prod, &acc)) {
            small_ok = false;
            break;
          }
        }
        if (acc > INT64_MAX || acc < INT64_MIN) small_ok = false;
        out[i] = static_cast<std::int64_t>(acc);
      }
      if (small_ok) return CharIndex(out, *primes_);
    }
  }

  if (exact()) {
    const std::size_t start_bits = max_bits();
    if (start_bits < kExactBitBudget) {
      if (auto P = BigMatrix(base).power(k, kExactBitBudget - start_bits)) {
        const auto v = big();
        return from_big(P->apply(v), *primes_);
      }
    }
  }

  CharIndex out;
  out.primes_ = primes_;
  out.dim_ = dim_;
  out.rep_ = Rep::residue;
  out.res_.resize(res_.size());
  for (std::size_t s = 0; s < 3; ++s) {
    const u64 p = primes_->p[s];
    const ModMatrix P = mod_power(base, k, p);
    for (std::size_t i = 0; i < dim_; ++i) {
      u64 acc = 0;
      for (std::size_t j = 0; j < dim_; ++j) acc = addmod(acc, mulmod(P[i * dim_ + j], res_[s * dim_ + j], p), p);
      out.res_[s * dim_ + i] = acc;
    }
  }
  out.finish();
  return out;
}

std::string CharIndex::to_string() const {
  std::string out = "(";
  if (rep_ == Rep::residue) {
    out = "fp(";
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) out += ",";
      out += std::to_string(res_[i]);
    }
    return out + ")";
  }
  if (rep_ == Rep::small) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) out += ",";
      out += std::to_string(small_[i]);
    }
    return out + ")";
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) out += ",";
    out += (*big_)[i].str();
  }
  return out + ")";
}

bool operator==(const CharIndex& a, const CharIndex& b) {
  if (a.dim_ != b.dim_) return false;
  if (a.primes_ != b.primes_) throw DomainError("comparing character indices with different prime sets");
  if (a.hash_ != b.hash_) return false;
  if (a.rep_ == CharIndex::Rep::small && b.rep_ == CharIndex::Rep::small) return a.small_ == b.small_;
  return a.res_ == b.res_;
}

std::strong_ordering operator<=>(const CharIndex& a, const CharIndex& b) {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.res_.begin(), a.res_.end(), b.res_.begin(), b.res_.end());
}

}  // namespace vdclab
