#include "vdclab/fixed_point.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

#include "vdclab/error.hpp"

namespace vdclab {
namespace {

using boost::multiprecision::cpp_int;

const cpp_int& two_128() {
  static const cpp_int v = cpp_int{1} << 128;
  return v;
}

Turns turns_from_cpp(const cpp_int& v) {
  cpp_int r = v % two_128();
  if (r < 0) r += two_128();
  return static_cast<u128>(r);
}

// floor(sqrt(k) * 2^128) - 2^128 * floor(sqrt(k)), i.e. the fractional bits.
cpp_int sqrt_fixed(unsigned k) {
  cpp_int scaled = cpp_int{k} << 256;
  return boost::multiprecision::sqrt(scaled);
}

}  // namespace

Turns turns_from_ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("turns_from_ratio: denominator must be positive");
  std::int64_t r = num % den;
  if (r < 0) r += den;
  // r < den < 2^63: two long-division steps of 64 bits each.
  const u128 d = static_cast<u128>(den);
  const u128 hi_num = static_cast<u128>(r) << 64;
  const u128 hi = hi_num / d;
  const u128 rem = hi_num % d;
  const u128 lo = (rem << 64) / d;
  return (hi << 64) | lo;
}

double turns_to_double(Turns x) {
  const auto top = static_cast<std::uint64_t>(x >> 64);
  const auto bottom = static_cast<std::uint64_t>(x);
  return static_cast<double>(std::ldexp(static_cast<long double>(top), -64) +
                             std::ldexp(static_cast<long double>(bottom), -128));
}

double turns_dist_to_integer(Turns x) {
  const Turns folded = (x >= kHalfTurn) ? (Turns{0} - x) : x;
  return turns_to_double(folded);
}

std::complex<double> unit_phase(Turns x) {
  constexpr u128 kMask = (u128{1} << 126) - 1;
  const unsigned quadrant = static_cast<unsigned>(x >> 126);
  const u128 r = x & kMask;
  constexpr long double kHalfPi = std::numbers::pi_v<long double> / 2;
  long double c;
  long double s;
  if (r <= (u128{1} << 125)) {
    const long double t = std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(r >> 62)), -64);
    const long double phi = kHalfPi * t;
    c = std::cos(phi);
    s = std::sin(phi);
  } else {
    const u128 rr = (u128{1} << 126) - r;
    const long double t = std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(rr >> 62)), -64);
    const long double psi = kHalfPi * t;
    c = std::sin(psi);
    s = std::cos(psi);
  }
  const double cd = static_cast<double>(c);
  const double sd = static_cast<double>(s);
  switch (quadrant) {
    case 0: return {cd, sd};
    case 1: return {-sd, cd};
    case 2: return {-cd, -sd};
    default: return {sd, -cd};
  }
}

Turns parse_turns(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw DomainError("empty fixed-point literal");
  if (s == "sqrt2-1") return turns_from_cpp(sqrt_fixed(2) - two_128());
  if (s == "sqrt3-1") return turns_from_cpp(sqrt_fixed(3) - two_128());
  if (s == "golden-1") return turns_from_cpp((sqrt_fixed(5) - two_128()) / 2);

  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    const std::string digits = s.substr(2);
    if (digits.size() > 32) throw DomainError("hex fraction longer than 128 bits: " + s);
    u128 v = 0;
    for (char ch : digits) {
      int d;
      if (ch >= '0' && ch <= '9') d = ch - '0';
      else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
      else throw DomainError("bad hex digit in " + s);
      v = (v << 4) | static_cast<u128>(d);
    }
    // Left-align: digits are the leading fraction bits.
    return v << (4 * (32 - digits.size()));
  }

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const i128 num = parse_i128(s.substr(0, slash));
    const i128 den = parse_i128(s.substr(slash + 1));
    if (den <= 0) throw DomainError("non-positive denominator in " + s);
    cpp_int n{i128_to_string(num)};
    cpp_int d{i128_to_string(den)};
    cpp_int q = (n << 128);
    // floor division toward -infinity
    cpp_int quo = q / d;
    if ((q % d != 0) && (q < 0)) quo -= 1;
    return turns_from_cpp(quo);
  }

  bool neg = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  cpp_int int_part = 0;
  cpp_int frac_digits = 0;
  cpp_int scale = 1;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch == '.') {
      if (seen_point) throw DomainError("two decimal points in " + s);
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) throw DomainError("bad fixed-point literal: " + s);
    any_digit = true;
    if (seen_point) {
      frac_digits = frac_digits * 10 + (ch - '0');
      scale *= 10;
    } else {
      int_part = int_part * 10 + (ch - '0');
    }
  }
  if (!any_digit) throw DomainError("bad fixed-point literal: " + s);
  cpp_int total = ((int_part * scale + frac_digits) << 128);
  cpp_int quo = total / scale;
  if (neg) {
    if (total % scale != 0) quo += 1;
    quo = -quo;
  }
  return turns_from_cpp(quo);
}

std::string turns_to_hex(Turns x) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  for (int shift = 124; shift >= 0; shift -= 4) {
    out.push_back(kDigits[static_cast<unsigned>((x >> shift) & 0xF)]);
  }
  return out;
}

std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string out;
  while (u != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

i128 parse_i128(std::string_view text) {
  std::size_t pos = 0;
  bool neg = false;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    neg = text[pos] == '-';
    ++pos;
  }
  if (pos >= text.size()) throw DomainError("bad integer literal: " + std::string(text));
  u128 acc = 0;
  constexpr u128 kLimit = static_cast<u128>(1) << 127;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (!std::isdigit(static_cast<unsigned char>(ch))) throw DomainError("bad integer literal: " + std::string(text));
    const auto digit = static_cast<u128>(ch - '0');
    if (acc > (kLimit - digit) / 10) throw OverflowError("integer literal exceeds 128 bits: " + std::string(text));
    acc = acc * 10 + digit;
  }
  if (!neg && acc == kLimit) throw OverflowError("integer literal exceeds 128 bits: " + std::string(text));
  return neg ? static_cast<i128>(u128{0} - acc) : static_cast<i128>(acc);
}

}  // namespace vdclab
