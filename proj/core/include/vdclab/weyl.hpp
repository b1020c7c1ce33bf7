#pragma once

#include <cstdint>
#include <vector>

#include "vdclab/char_vector.hpp"
#include "vdclab/phase.hpp"
#include "vdclab/sequence.hpp"

namespace vdclab {

/// (1/N) sum_{n=1}^N exp(2 pi i k_n x), each k_n x reduced mod 1 exactly,
/// summed in ascending n with compensation.
Complex weyl_sum(const IntegerSequenceSpec& spec, Turns x, std::int64_t N);
inline Complex weyl_sum(const IntegerSequenceSpec& spec, Irrational x, std::int64_t N) {
  return weyl_sum(spec, x.value(), N);
}

/// Star discrepancy of a finite point set in [0,1):
/// max_i max(i/N - x_(i), x_(i) - (i-1)/N) over the sorted points.
double star_discrepancy(std::vector<Turns> points);
/// Star discrepancy of {k_n x mod 1}, n = 1..N.
double star_discrepancy(const IntegerSequenceSpec& spec, Turns x, std::int64_t N);

/// R_k = {n : n^k alpha mod 1 in [lo, hi]}.
struct RkSpec {
  int k = 2;
  Irrational alpha = zoo_alpha();
  Rational lo{1, 4};
  Rational hi{3, 4};
};

struct RkResult {
  std::vector<std::int64_t> members;
  /// Members and non-members whose decision could flip if alpha moved by
  /// less than its truncation error 2^-128.
  std::vector<std::int64_t> boundary;
};

/// Throws DomainError for k < 1 or a window outside [0,1], OverflowError if n^k leaves 127 bits.
RkResult rk_enumerate(const RkSpec& spec, std::int64_t N);

}  // namespace vdclab
