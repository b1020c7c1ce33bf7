#include "vdclab/weyl.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

#include "vdclab/checked.hpp"
#include "vdclab/error.hpp"
#include "vdclab/numeric.hpp"

namespace vdclab {

using boost::multiprecision::uint256_t;

Complex weyl_sum(const IntegerSequenceSpec& spec, Turns x, std::int64_t N) {
  if (N < 1) throw DomainError("weyl_sum needs N >= 1");
  ComplexKahanSum acc;
  for (std::int64_t n = 1; n <= N; ++n) acc += unit_phase(mul_turns(seq_eval(spec, n), x));
  return acc.value() / static_cast<double>(N);
}

double star_discrepancy(std::vector<Turns> points) {
  if (points.empty()) throw DomainError("star_discrepancy of an empty point set");
  std::sort(points.begin(), points.end());
  const double N = static_cast<double>(points.size());
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = turns_to_double(points[i]);
    d = std::max({d, static_cast<double>(i + 1) / N - x, x - static_cast<double>(i) / N});
  }
  return d;
}

double star_discrepancy(const IntegerSequenceSpec& spec, Turns x, std::int64_t N) {
  if (N < 1) throw DomainError("star_discrepancy needs N >= 1");
  std::vector<Turns> pts;
  pts.reserve(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) pts.push_back(mul_turns(seq_eval(spec, n), x));
  return star_discrepancy(std::move(pts));
}

namespace {

// Compares t / 2^128 with p / q exactly; also reports whether they are
// within slack / 2^128 of each other.
int compare_turns(Turns t, const Rational& r, u128 slack, bool& close) {
  const uint256_t lhs = uint256_t(t) * uint256_t(static_cast<std::uint64_t>(r.den));
  const uint256_t rhs = uint256_t(static_cast<std::uint64_t>(r.num)) << 128;
  const uint256_t gap = lhs > rhs ? lhs - rhs : rhs - lhs;
  close = gap <= uint256_t(slack) * uint256_t(static_cast<std::uint64_t>(r.den));
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

RkResult rk_enumerate(const RkSpec& spec, std::int64_t N) {
  if (spec.k < 1) throw DomainError("R_k needs k >= 1");
  if (spec.lo.num < 0 || spec.hi.num > spec.hi.den || spec.hi < spec.lo) {
    throw DomainError("R_k window must satisfy 0 <= lo <= hi <= 1");
  }
  const Turns alpha = spec.alpha.value();
  RkResult out;
  for (std::int64_t n = 1; n <= N; ++n) {
    i128 nk = 1;
    for (int j = 0; j < spec.k; ++j) nk = checked::mul(nk, i128{n}, "n^k in R_k");
    const Turns x = mul_turns(nk, alpha);
    bool near_lo = false;
    bool near_hi = false;
    const bool inside = compare_turns(x, spec.lo, static_cast<u128>(nk), near_lo) >= 0 &&
                        compare_turns(x, spec.hi, static_cast<u128>(nk), near_hi) <= 0;
    // The true value lies in [x, x + n^k 2^-128); also the wrap at 0 ~ 1.
    bool near_wrap = false;
    if (spec.lo.num == 0 || spec.hi == Rational{1, 1}) near_wrap = x > ~static_cast<u128>(nk);
    if (inside) out.members.push_back(n);
    if (near_lo || near_hi || near_wrap) out.boundary.push_back(n);
  }
  return out;
}

}  // namespace vdclab
