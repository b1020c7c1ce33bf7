#pragma once

// Independent brute-force routines used to check the library. They work
// in plain long double / direct loops and share no code paths with the
// engines under test beyond the public value types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "vdclab/char_vector.hpp"

namespace oracle {

using cld = std::complex<long double>;

inline cld expi(long double turns) {
  const long double t = 2.0L * std::numbers::pi_v<long double> * (turns - std::floor(turns));
  return {std::cos(t), std::sin(t)};
}

/// Evaluates a trigonometric polynomial with small indices at a point.
inline cld eval(const vdclab::CharVector& f, const std::vector<long double>& x) {
  cld acc = 0;
  for (const auto& [m, c] : f.terms()) {
    long double phase = 0;
    auto idx = m.small();
    for (std::size_t k = 0; k < x.size(); ++k) phase += static_cast<long double>(idx[k]) * x[k];
    acc += cld(c.real(), c.imag()) * expi(phase);
  }
  return acc;
}

/// Frac part of n * x computed with 64-bit integer multiple of a binary fraction
/// given as a rational p/2^64 approximation; adequate for n up to ~1e9.
inline long double frac(long double v) { return v - std::floor(v); }

}  // namespace oracle
