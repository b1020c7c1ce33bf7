#pragma once

// Points of the circle R/Z as 128-bit binary fractions. Arithmetic mod 1 is
// ordinary wrapping arithmetic on unsigned __int128, so k*x mod 1 is exact
// for any integer multiplier k that fits in 128 bits.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace vdclab {

using i128 = __int128;
using u128 = unsigned __int128;

/// 2^-128 units of a full turn.
using Turns = u128;

inline constexpr Turns kHalfTurn = Turns{1} << 127;
inline constexpr Turns kQuarterTurn = Turns{1} << 126;

/// k*x mod 1, exact.
constexpr Turns mul_turns(i128 k, Turns x) { return static_cast<u128>(k) * x; }

/// floor(num/den * 2^128) mod 2^128 for any integers, den > 0.
Turns turns_from_ratio(std::int64_t num, std::int64_t den);

/// Value in [0,1) as a double, correctly truncated from the top bits.
double turns_to_double(Turns x);

/// Signed distance-free representation: distance from x to the nearest integer, in [0, 1/2].
double turns_dist_to_integer(Turns x);

/// exp(2*pi*i*x). Quarter turns are exact: 1/4 -> (0,1), 1/2 -> (-1,0).
std::complex<double> unit_phase(Turns x);

/// Parses "0.4142...", "1/3", "-1/16", "0x6a09e667..." (hex fraction bits) or
/// the named constants "sqrt2-1", "golden-1" ((sqrt5-1)/2) and "sqrt3-1".
/// Decimal and named values are truncated to 128 fractional bits.
Turns parse_turns(std::string_view text);

/// 32 hex digits, "0x"-prefixed; parse_turns round-trips it.
std::string turns_to_hex(Turns x);

std::string i128_to_string(i128 v);
i128 parse_i128(std::string_view text);

}  // namespace vdclab
