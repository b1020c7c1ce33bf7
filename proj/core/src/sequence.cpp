#include "vdclab/sequence.hpp"

#include <cstring>
#include <numeric>

#include <gmp.h>
#include <mpfr.h>

#include "vdclab/checked.hpp"
#include "vdclab/error.hpp"

namespace vdclab {
namespace {

class MpfrVar {
 public:
  explicit MpfrVar(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrVar() { mpfr_clear(v_); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

constexpr mpfr_prec_t kFloorPrecision = 256;

void set_exponent(mpfr_ptr c, std::int64_t integer_part, Turns fraction) {
  mpfr_set_ui(c, static_cast<unsigned long>(fraction >> 64), MPFR_RNDN);
  mpfr_mul_2si(c, c, 64, MPFR_RNDN);
  mpfr_add_ui(c, c, static_cast<unsigned long>(fraction), MPFR_RNDN);
  mpfr_div_2si(c, c, 128, MPFR_RNDN);
  mpfr_add_si(c, c, static_cast<long>(integer_part), MPFR_RNDN);
}

i128 mpfr_floor_i128(mpfr_ptr x) {
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, x, MPFR_RNDD);
  if (mpz_sizeinbase(z, 2) > 126) {
    mpz_clear(z);
    throw OverflowError("floor_power value exceeds 126 bits");
  }
  const bool neg = mpz_sgn(z) < 0;
  mpz_abs(z, z);
  u128 mag = 0;
  std::size_t count = 0;
  std::uint64_t words[2] = {0, 0};
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, z);
  mpz_clear(z);
  mag = (static_cast<u128>(words[1]) << 64) | words[0];
  return neg ? -static_cast<i128>(mag) : static_cast<i128>(mag);
}

SeqSample eval_floor_power(const IntegerSequenceSpec& spec, std::int64_t n) {
  MpfrVar c(kFloorPrecision);
  MpfrVar base(kFloorPrecision);
  MpfrVar lo(kFloorPrecision);
  MpfrVar hi(kFloorPrecision);
  set_exponent(c.get(), spec.exponent_integer_part(), spec.exponent_fraction());
  mpfr_set_si(base.get(), static_cast<long>(n), MPFR_RNDN);
  const int lo_exact = mpfr_pow(lo.get(), base.get(), c.get(), MPFR_RNDD);
  mpfr_pow(hi.get(), base.get(), c.get(), MPFR_RNDU);

  SeqSample out;
  out.value = mpfr_floor_i128(lo.get());
  if (lo_exact == 0) return out;  // n^c computed exactly

  const i128 hi_floor = mpfr_floor_i128(hi.get());
  if (hi_floor != out.value) {
    out.ambiguous = true;
    return out;
  }
  // Distance of the enclosure from the nearest integers.
  MpfrVar frac(kFloorPrecision);
  MpfrVar eps(kFloorPrecision);
  mpfr_set_ui_2exp(eps.get(), 1, -64, MPFR_RNDN);
  mpfr_frac(frac.get(), lo.get(), MPFR_RNDD);
  if (mpfr_less_p(frac.get(), eps.get())) out.ambiguous = true;
  mpfr_frac(frac.get(), hi.get(), MPFR_RNDU);
  mpfr_ui_sub(frac.get(), 1, frac.get(), MPFR_RNDD);
  if (mpfr_less_p(frac.get(), eps.get())) out.ambiguous = true;
  return out;
}

i128 binomial_nonneg(i128 n, int k) {
  if (n < 0) throw DomainError("binomial basis evaluated at a negative argument");
  if (k < 0 || n < k) return 0;
  i128 r = 1;
  for (int j = 1; j <= k; ++j) {
    const i128 factor = n - k + j;
    const i128 g = std::gcd(static_cast<std::int64_t>(r % j), static_cast<std::int64_t>(j));
    r = checked::mul(r / g, factor / (j / g), "binomial coefficient");
  }
  return r;
}

void trim(std::vector<i128>& c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.empty()) c.push_back(0);
}

}  // namespace

i128 binomial_eval(const std::vector<i128>& coeffs, i128 n) {
  i128 acc = 0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0) continue;
    const i128 b = binomial_nonneg(n, static_cast<int>(j));
    acc = checked::add(acc, checked::mul(coeffs[j], b, "polynomial term"), "polynomial sum");
  }
  return acc;
}

IntegerSequenceSpec IntegerSequenceSpec::polynomial_binomial(std::vector<i128> coeffs) {
  IntegerSequenceSpec s(Kind::polynomial);
  trim(coeffs);
  s.coeffs_ = std::move(coeffs);
  return s;
}

IntegerSequenceSpec IntegerSequenceSpec::polynomial_monomial(const std::vector<Rational>& coeffs) {
  if (coeffs.empty()) return polynomial_binomial({0});
  const std::size_t D = coeffs.size() - 1;
  // Values p(0..D), then forward differences at 0.
  std::vector<Rational> values(D + 1);
  for (std::size_t x = 0; x <= D; ++x) {
    Rational acc{0, 1};
    Rational power{1, 1};
    for (std::size_t k = 0; k <= D; ++k) {
      acc = acc + coeffs[k] * power;
      power = power * Rational{static_cast<std::int64_t>(x), 1};
    }
    values[x] = acc;
  }
  std::vector<i128> binom(D + 1);
  for (std::size_t j = 0; j <= D; ++j) {
    if (values[0].den != 1) throw DomainError("polynomial is not integer-valued (binomial coefficient " +
                                              values[0].to_string() + ")");
    binom[j] = values[0].num;
    for (std::size_t x = 0; x + 1 < values.size(); ++x) values[x] = values[x + 1] - values[x];
    values.pop_back();
  }
  return polynomial_binomial(std::move(binom));
}

IntegerSequenceSpec IntegerSequenceSpec::floor_power(std::int64_t integer_part, Turns fraction) {
  if (integer_part < 0 || (integer_part == 0 && fraction == 0)) throw DomainError("floor_power exponent must be > 0");
  IntegerSequenceSpec s(Kind::floor_power);
  s.coeffs_.clear();
  s.c_int_ = integer_part;
  s.c_frac_ = fraction;
  return s;
}

IntegerSequenceSpec IntegerSequenceSpec::floor_power(std::string_view exponent) {
  std::string e(exponent);
  const auto point = e.find('.');
  const std::string int_text = point == std::string::npos ? e : e.substr(0, point);
  const std::int64_t ip = int_text.empty() ? 0 : static_cast<std::int64_t>(parse_i128(int_text));
  const Turns frac = point == std::string::npos ? Turns{0} : parse_turns("0." + e.substr(point + 1));
  return floor_power(ip, frac);
}

IntegerSequenceSpec IntegerSequenceSpec::table(std::vector<i128> values) {
  if (values.empty()) throw DomainError("table sequence must be non-empty");
  IntegerSequenceSpec s(Kind::table);
  s.coeffs_ = std::move(values);
  return s;
}

std::vector<Rational> IntegerSequenceSpec::monomial_coeffs() const {
  if (kind_ != Kind::polynomial) throw DomainError("monomial_coeffs on a non-polynomial sequence");
  std::vector<Rational> out(coeffs_.size(), Rational{0, 1});
  // falling factorial n(n-1)...(n-j+1), divided by j!
  std::vector<Rational> falling{Rational{1, 1}};
  std::int64_t fact = 1;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (j > 0) {
      fact = checked::mul<std::int64_t>(fact, static_cast<std::int64_t>(j), "factorial");
      std::vector<Rational> next(falling.size() + 1, Rational{0, 1});
      const Rational shift{-static_cast<std::int64_t>(j - 1), 1};
      for (std::size_t k = 0; k < falling.size(); ++k) {
        next[k + 1] = next[k + 1] + falling[k];
        next[k] = next[k] + falling[k] * shift;
      }
      falling = std::move(next);
    }
    const Rational scale = Rational::make(checked::narrow<std::int64_t>(coeffs_[j], "polynomial coefficient"), fact);
    for (std::size_t k = 0; k < falling.size(); ++k) out[k] = out[k] + falling[k] * scale;
  }
  while (out.size() > 1 && out.back().num == 0) out.pop_back();
  return out;
}

std::int64_t IntegerSequenceSpec::degree() const {
  if (kind_ != Kind::polynomial) return -1;
  for (std::size_t j = coeffs_.size(); j-- > 0;) {
    if (coeffs_[j] != 0) return static_cast<std::int64_t>(j);
  }
  return -1;
}

double IntegerSequenceSpec::exponent() const {
  return static_cast<double>(c_int_) + turns_to_double(c_frac_);
}

std::string IntegerSequenceSpec::describe() const {
  switch (kind_) {
    case Kind::polynomial: {
      std::string out = "poly[";
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (j) out += ",";
        out += i128_to_string(coeffs_[j]);
      }
      return out + "]";
    }
    case Kind::floor_power: return "floor(n^" + std::to_string(exponent()) + ")";
    case Kind::table: return "table[" + std::to_string(coeffs_.size()) + "]";
    case Kind::difference: return "diff(" + base_->describe() + ", h=" + std::to_string(lag_) + ")";
  }
  return "?";
}

bool operator==(const IntegerSequenceSpec& a, const IntegerSequenceSpec& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case IntegerSequenceSpec::Kind::polynomial:
    case IntegerSequenceSpec::Kind::table: return a.coeffs_ == b.coeffs_;
    case IntegerSequenceSpec::Kind::floor_power: return a.c_int_ == b.c_int_ && a.c_frac_ == b.c_frac_;
    case IntegerSequenceSpec::Kind::difference: return a.lag_ == b.lag_ && *a.base_ == *b.base_;
  }
  return false;
}

SeqSample seq_eval_checked(const IntegerSequenceSpec& spec, std::int64_t n) {
  if (n < 1) throw DomainError("sequence index must be >= 1");
  switch (spec.kind()) {
    case IntegerSequenceSpec::Kind::polynomial: return {binomial_eval(spec.binomial_coeffs(), n), false};
    case IntegerSequenceSpec::Kind::floor_power: return eval_floor_power(spec, n);
    case IntegerSequenceSpec::Kind::table: {
      const auto& v = spec.table_values();
      if (static_cast<std::size_t>(n) > v.size()) {
        throw DomainError("table sequence has " + std::to_string(v.size()) + " entries; n=" + std::to_string(n));
      }
      return {v[static_cast<std::size_t>(n - 1)], false};
    }
    case IntegerSequenceSpec::Kind::difference: {
      const SeqSample a = seq_eval_checked(spec.base(), checked::add<std::int64_t>(n, spec.lag(), "sequence index"));
      const SeqSample b = seq_eval_checked(spec.base(), n);
      return {checked::sub(a.value, b.value, "difference sequence"), a.ambiguous || b.ambiguous};
    }
  }
  throw DomainError("unknown sequence kind");
}

i128 seq_eval(const IntegerSequenceSpec& spec, std::int64_t n) {
  const SeqSample s = seq_eval_checked(spec, n);
  if (s.ambiguous) {
    throw DomainError("ambiguous floor in " + spec.describe() + " at n=" + std::to_string(n));
  }
  return s.value;
}

IntegerSequenceSpec diff_profile(const IntegerSequenceSpec& spec, std::int64_t h) {
  if (h < 1) throw DomainError("difference lag must be >= 1");
  switch (spec.kind()) {
    case IntegerSequenceSpec::Kind::polynomial: {
      // p(n+h) = sum_k a_k sum_j C(h, k-j) C(n, j)  (Vandermonde)
      const auto& a = spec.binomial_coeffs();
      std::vector<i128> b(a.size(), 0);
      for (std::size_t j = 0; j < a.size(); ++j) {
        i128 acc = 0;
        for (std::size_t k = j; k < a.size(); ++k) {
          acc = checked::add(acc, checked::mul(a[k], binomial_nonneg(h, static_cast<int>(k - j)), "difference"),
                             "difference");
        }
        b[j] = checked::sub(acc, a[j], "difference");
      }
      return IntegerSequenceSpec::polynomial_binomial(std::move(b));
    }
    case IntegerSequenceSpec::Kind::table: {
      const auto& v = spec.table_values();
      if (static_cast<std::size_t>(h) >= v.size()) throw DomainError("difference lag exceeds table length");
      std::vector<i128> out;
      for (std::size_t n = 0; n + static_cast<std::size_t>(h) < v.size(); ++n) {
        out.push_back(checked::sub(v[n + static_cast<std::size_t>(h)], v[n], "difference"));
      }
      return IntegerSequenceSpec::table(std::move(out));
    }
    case IntegerSequenceSpec::Kind::floor_power:
    case IntegerSequenceSpec::Kind::difference: {
      IntegerSequenceSpec s(IntegerSequenceSpec::Kind::difference);
      s.coeffs_.clear();
      s.base_ = std::make_shared<const IntegerSequenceSpec>(spec);
      s.lag_ = h;
      return s;
    }
  }
  throw DomainError("unknown sequence kind");
}

}  // namespace vdclab
