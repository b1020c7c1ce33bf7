#include "vdclab/affine_system.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "vdclab/checked.hpp"
#include "vdclab/error.hpp"

namespace vdclab {
namespace {

std::vector<Phase> mat_phase(const IntMatrix& A, std::span<const Phase> b) {
  const std::size_t d = A.dim();
  std::vector<Phase> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::int64_t a = A(i, j);
      if (a == 0 || b[j].is_zero()) continue;
      out[i] += b[j].scaled(a);
    }
  }
  return out;
}

// C(n, k) for n >= 0, exact; throws on overflow.
i128 binomial(i128 n, int k) {
  if (k < 0 || n < k) return 0;
  i128 r = 1;
  for (int j = 1; j <= k; ++j) {
    // r * (n - k + j) is divisible by j; split the division to delay overflow.
    const i128 factor = n - k + j;
    const i128 g = std::gcd(static_cast<std::int64_t>(r % j), static_cast<std::int64_t>(j));
    const i128 jg = j / g;
    const i128 rg = r / g;
    r = checked::mul(rg, factor / jg, "binomial coefficient");
  }
  return r;
}

// x -> A^n and sum_{j<n} A^j b in closed form when A is unipotent:
// A^n = sum_k C(n,k) N^k and sum_{j<n} A^j b = sum_k C(n,k+1) N^k b.
struct UnipotentForm {
  std::vector<IntMatrix> npow;               // N^0 .. N^{r-1}
  std::vector<std::vector<Phase>> npow_b;    // N^k b
};

std::optional<UnipotentForm> unipotent_form(const AffineSystem& T) {
  const std::size_t d = T.dim();
  IntMatrix N = T.matrix();
  for (std::size_t i = 0; i < d; ++i) N(i, i) -= 1;
  UnipotentForm form;
  IntMatrix P = IntMatrix::identity(d);
  for (std::size_t k = 0; k <= d; ++k) {
    if (P == IntMatrix(d)) return form;
    if (k == d) return std::nullopt;
    form.npow.push_back(P);
    form.npow_b.push_back(mat_phase(P, T.translation()));
    auto next = P.try_mul(N);
    if (!next) return std::nullopt;
    P = std::move(*next);
  }
  return std::nullopt;
}

std::optional<IntMatrix> unipotent_matrix_power(const UnipotentForm& form, std::int64_t n) {
  const std::size_t d = form.npow.front().dim();
  std::vector<i128> acc(d * d, 0);
  for (std::size_t k = 0; k < form.npow.size(); ++k) {
    const i128 c = binomial(n, static_cast<int>(k));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        i128 prod;
        if (__builtin_mul_overflow(c, static_cast<i128>(form.npow[k](i, j)), &prod) ||
            __builtin_add_overflow(acc[i * d + j], prod, &acc[i * d + j])) {
          return std::nullopt;
        }
      }
  }
  IntMatrix out(d);
  for (std::size_t i = 0; i < d * d; ++i) {
    if (acc[i] > INT64_MAX || acc[i] < INT64_MIN) return std::nullopt;
    out(i / d, i % d) = static_cast<std::int64_t>(acc[i]);
  }
  return out;
}

std::vector<Phase> unipotent_translation(const UnipotentForm& form, std::int64_t n) {
  const std::size_t d = form.npow.front().dim();
  std::vector<Phase> out(d);
  for (std::size_t k = 0; k < form.npow.size(); ++k) {
    const i128 c = binomial(n, static_cast<int>(k) + 1);
    if (c == 0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      if (!form.npow_b[k][i].is_zero()) out[i] += form.npow_b[k][i].scaled(c);
    }
  }
  return out;
}

std::int64_t checked_neg(std::int64_t n) {
  if (n == INT64_MIN) throw OverflowError("iterate exponent -2^63 cannot be negated");
  return -n;
}

}  // namespace

AffineSystem::AffineSystem(IntMatrix A, std::vector<Phase> b, std::string label)
    : A_(std::move(A)), b_(std::move(b)), label_(std::move(label)) {
  if (b_.size() != A_.dim()) throw DomainError("translation length differs from matrix dimension");
  if (!A_.is_unimodular()) throw DomainError("matrix is not measure preserving: det != +-1");
}

AffineSystem AffineSystem::identity(std::size_t d) {
  return AffineSystem(IntMatrix::identity(d), std::vector<Phase>(d), "identity");
}

AffineSystem AffineSystem::rotation(std::vector<Phase> b, std::string label) {
  const std::size_t d = b.size();
  return AffineSystem(IntMatrix::identity(d), std::move(b), std::move(label));
}

AffineSystem AffineSystem::skew_product(Phase shift, std::string label) {
  return AffineSystem(IntMatrix::from_rows({{1, 0}, {1, 1}}), {std::move(shift), Phase{}}, std::move(label));
}

AffineSystem AffineSystem::product(const AffineSystem& first, const AffineSystem& second) {
  const std::size_t d1 = first.dim();
  const std::size_t d2 = second.dim();
  IntMatrix A(d1 + d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j) A(i, j) = first.matrix()(i, j);
  for (std::size_t i = 0; i < d2; ++i)
    for (std::size_t j = 0; j < d2; ++j) A(d1 + i, d1 + j) = second.matrix()(i, j);
  std::vector<Phase> b = first.translation();
  b.insert(b.end(), second.translation().begin(), second.translation().end());
  std::string label = first.label() + "x" + second.label();
  return AffineSystem(std::move(A), std::move(b), std::move(label));
}

bool AffineSystem::has_zero_translation() const {
  return std::all_of(b_.begin(), b_.end(), [](const Phase& p) { return p.is_zero(); });
}

AffineSystem AffineSystem::compose(const AffineSystem& other) const {
  if (other.dim() != dim()) throw DomainError("composing systems of different dimension");
  IntMatrix A = A_ * other.A_;
  std::vector<Phase> b = mat_phase(A_, other.b_);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += b_[i];
  AffineSystem out;
  out.A_ = std::move(A);
  out.b_ = std::move(b);
  out.label_ = label_;
  return out;
}

AffineSystem AffineSystem::inverse() const {
  IntMatrix Ainv = A_.inverse();
  std::vector<Phase> b = mat_phase(Ainv, b_);
  for (auto& p : b) p = -p;
  AffineSystem out;
  out.A_ = std::move(Ainv);
  out.b_ = std::move(b);
  out.label_ = label_;
  return out;
}

bool AffineSystem::commutes_with(const AffineSystem& other) const {
  if (other.dim() != dim()) return false;
  if (!A_.commutes_with(other.A_)) return false;
  // A b' + b == A' b + b' (mod 1)
  std::vector<Phase> lhs = mat_phase(A_, other.b_);
  std::vector<Phase> rhs = mat_phase(other.A_, b_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!((lhs[i] + b_[i]) - (rhs[i] + other.b_[i])).is_zero()) return false;
  }
  return true;
}

std::vector<Turns> AffineSystem::apply(std::span<const Turns> x) const {
  const std::size_t d = dim();
  std::vector<Turns> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    Turns acc = b_[i].turns();
    for (std::size_t j = 0; j < d; ++j) acc += mul_turns(A_(i, j), x[j]);
    out[i] = acc;
  }
  return out;
}

AffineSystem system_power(const AffineSystem& T, std::int64_t n) {
  if (n == 0) return AffineSystem::identity(T.dim());
  try {
    if (n < 0) return system_power(T.inverse(), checked_neg(n));
    if (auto form = unipotent_form(T)) {
      auto A = unipotent_matrix_power(*form, n);
      if (!A) throw OverflowError("matrix entries of the iterate leave 64 bits");
      return AffineSystem(std::move(*A), unipotent_translation(*form, n), T.label());
    }
    AffineSystem result = AffineSystem::identity(T.dim());
    AffineSystem base = T;
    auto e = static_cast<std::uint64_t>(n);
    while (e != 0) {
      if (e & 1) result = result.compose(base);
      e >>= 1;
      if (e != 0) base = base.compose(base);
    }
    return AffineSystem(result.matrix(), result.translation(), T.label());
  } catch (const OverflowError& err) {
    throw OverflowError("system_power(" + T.label() + ", n=" + std::to_string(n) + "): " + err.what());
  }
}

std::vector<Phase> translation_power(const AffineSystem& T, std::int64_t n) {
  if (T.has_zero_translation() || n == 0) return std::vector<Phase>(T.dim());
  try {
    if (n > 0) {
      if (auto form = unipotent_form(T)) return unipotent_translation(*form, n);
    }
  } catch (const OverflowError& err) {
    throw OverflowError("translation_power(" + T.label() + ", n=" + std::to_string(n) + "): " + err.what());
  }
  return system_power(T, n).translation();
}

Phase character_phase(const CharIndex& m, std::span<const Phase> b) {
  if (m.rep() != CharIndex::Rep::small) throw DomainError("formal character phase needs a 64-bit index");
  const auto comps = m.small();
  Phase out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (comps[i] == 0 || b[i].is_zero()) continue;
    out += b[i].scaled(comps[i]);
  }
  return out;
}

Turns character_phase_turns(const CharIndex& m, std::span<const Phase> b) {
  const bool zero_b = std::all_of(b.begin(), b.end(), [](const Phase& p) { return p.is_zero(); });
  if (zero_b) return 0;
  if (m.rep() == CharIndex::Rep::small) return character_phase(m, b).turns();
  if (!m.exact()) throw DomainError("residue-only character index under a non-zero translation");
  // Big components: reduce each multiplier modulo 2^128 and each rational denominator.
  const auto comps = m.big();
  Turns acc = 0;
  const BigInt two128 = BigInt{1} << 128;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].is_zero()) continue;
    BigInt k = comps[i] % two128;
    if (k < 0) k += two128;
    const auto k128 = static_cast<u128>(k);
    if (b[i].rational_num() != 0) {
      BigInt r = comps[i] % b[i].rational_den();
      if (r < 0) r += b[i].rational_den();
      const auto rr = static_cast<std::int64_t>(r);
      acc += turns_from_ratio(static_cast<std::int64_t>((static_cast<i128>(rr) * b[i].rational_num()) % b[i].rational_den()),
                              b[i].rational_den());
    }
    for (const auto& [x, c] : b[i].terms()) acc += k128 * mul_turns(c, x.value());
  }
  return acc;
}

namespace {

std::optional<IntMatrix> matrix_power(const AffineSystem& T, std::int64_t n) {
  if (n < 0) return std::nullopt;
  if (auto form = unipotent_form(T)) return unipotent_matrix_power(*form, n);
  return T.matrix().try_power(n);
}

}  // namespace

CharVector pushforward(const AffineSystem& T, const CharVector& f, std::int64_t n) {
  if (n == 0 || f.empty()) return f;
  for (const auto& t : f.terms()) {
    if (t.first.dim() != T.dim()) throw DomainError("observable dimension differs from system dimension");
  }
  const std::vector<Phase> bn = translation_power(T, n);
  const auto P = matrix_power(T, n);
  const IntMatrix At = T.matrix().transpose();

  std::vector<CharVector::Term> terms;
  terms.reserve(f.size());
  for (const auto& [m, c] : f.terms()) {
    const Turns phase = character_phase_turns(m, bn);
    CharIndex image;
    bool done = false;
    if (P && m.rep() == CharIndex::Rep::small) {
      const std::size_t d = T.dim();
      std::vector<std::int64_t> out(d);
      const auto v = m.small();
      done = true;
      for (std::size_t i = 0; i < d && done; ++i) {
        i128 acc = 0;
        for (std::size_t j = 0; j < d; ++j) {
          i128 prod;
          // (A^T)^n = (A^n)^T
          if (__builtin_mul_overflow(static_cast<i128>((*P)(j, i)), static_cast<i128>(v[j]), &prod) ||
              __builtin_add_overflow(acc, prod, &acc)) {
            done = false;
            break;
          }
        }
        if (acc > INT64_MAX || acc < INT64_MIN) done = false;
        out[i] = static_cast<std::int64_t>(acc);
      }
      if (done) image = CharIndex(out, m.primes());
    }
    if (!done) image = m.transformed(At, n);
    terms.emplace_back(std::move(image), c * unit_phase(phase));
  }
  return CharVector::from_terms(std::move(terms));
}

std::uint64_t finite_orbit_period_bound(std::size_t d) {
  // psi(p) = sum over prime powers q^a || p of phi(q^a), minus 1 when p = 2 mod 4:
  // the least dimension admitting an integer matrix of order p.
  auto psi = [](std::uint64_t p) {
    std::uint64_t total = 0;
    std::uint64_t rest = p;
    for (std::uint64_t q = 2; q * q <= rest; ++q) {
      if (rest % q != 0) continue;
      std::uint64_t qa = 1;
      while (rest % q == 0) {
        rest /= q;
        qa *= q;
      }
      total += qa / q * (q - 1);
    }
    if (rest > 1) total += rest - 1;
    if (p % 4 == 2) total -= 1;
    return total;
  };
  std::uint64_t l = 1;
  const std::uint64_t search = 1 + 64 * static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  for (std::uint64_t p = 2; p <= search; ++p) {
    if (psi(p) > d) continue;
    const std::uint64_t g = std::gcd(l, p);
    if (l / g > UINT64_MAX / p) return UINT64_MAX;
    l = l / g * p;
  }
  return l;
}

CharVector invariant_projection(const AffineSystem& T, const CharVector& f) {
  if (f.empty()) return f;
  const IntMatrix At = T.matrix().transpose();
  const std::uint64_t period_bound = finite_orbit_period_bound(T.dim());
  std::unordered_set<CharIndex, CharIndexHash> processed;
  std::vector<std::pair<Complex, CharVector>> pieces;

  for (const auto& [m, c] : f.terms()) {
    if (processed.contains(m)) continue;
    std::vector<CharIndex> cycle{m};
    CharIndex cur = m;
    bool finite = false;
    bool infinite = false;
    for (std::uint64_t k = 1; k <= kOrbitIterationCap; ++k) {
      cur = cur.transformed(At, 1);
      if (cur == m) {
        finite = true;
        break;
      }
      if (k >= period_bound || (cur.exact() && cur.max_bits() > kOrbitNormBitsCap)) {
        infinite = true;
        break;
      }
      cycle.push_back(cur);
    }
    if (!finite && !infinite) {
      throw OrbitCapError("orbit growth exceeds cap for character " + m.to_string());
    }
    if (infinite) {
      processed.insert(m);
      continue;
    }
    for (const auto& idx : cycle) processed.insert(idx);
    const auto p = static_cast<std::int64_t>(cycle.size());
    const std::vector<Phase> bp = translation_power(T, p);
    if (!character_phase(m, bp).is_zero()) continue;

    std::unordered_set<CharIndex, CharIndexHash> members(cycle.begin(), cycle.end());
    std::vector<CharVector::Term> restricted;
    for (const auto& t : f.terms()) {
      if (members.contains(t.first)) restricted.push_back(t);
    }
    const CharVector fo = CharVector::from_terms(std::move(restricted));
    for (std::int64_t k = 0; k < p; ++k) pieces.emplace_back(1.0 / static_cast<double>(p), pushforward(T, fo, k));
  }
  return char_combine(pieces);
}

}  // namespace vdclab
