#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vdclab/affine_system.hpp"
#include "vdclab/char_vector.hpp"
#include "vdclab/sequence.hpp"

namespace vdclab {

/// An indexed generator n -> f_n of trigonometric polynomials, n >= 1.
class Orbit {
 public:
  virtual ~Orbit() = default;
  virtual std::size_t dim() const = 0;
  virtual CharVector at(std::int64_t n) const = 0;
  /// f_first, ..., f_{first+count-1}. Implementations may step incrementally.
  virtual void fill(std::int64_t first, std::size_t count, std::vector<CharVector>& out) const;
  virtual std::string describe() const = 0;
};

using OrbitPtr = std::shared_ptr<const Orbit>;

/// A scalar sequence n -> c_n, n >= 1.
class Weights {
 public:
  virtual ~Weights() = default;
  virtual Complex at(std::int64_t n) const = 0;
  virtual std::string describe() const = 0;
};

using WeightsPtr = std::shared_ptr<const Weights>;

/// f_n = f o T^{k_n}. With k_n = n the orbit steps one iterate at a time and
/// carries each term's accumulated phase exactly in fixed point.
OrbitPtr system_orbit(AffineSystem T, CharVector f, IntegerSequenceSpec k = IntegerSequenceSpec::identity());

/// f_n = c_n g_n.
OrbitPtr scaled_orbit(WeightsPtr c, OrbitPtr g);

/// f_n = sum_j a_j g^{(j)}_n.
OrbitPtr sum_orbit(std::vector<std::pair<Complex, OrbitPtr>> parts);

/// f_n = prod_j g^{(j)}_n (pointwise products of trigonometric polynomials).
OrbitPtr product_orbit(std::vector<OrbitPtr> factors);

/// c_n = a exp(2 pi i k_n x), with k_n x reduced mod 1 exactly.
WeightsPtr phase_weights(IntegerSequenceSpec k, Phase x, Complex amplitude = 1.0);
WeightsPtr constant_weights(Complex c = 1.0);

/// The scalar sequence c_n viewed as the orbit c_n e_0 on T^1.
OrbitPtr weights_as_orbit(WeightsPtr c);

}  // namespace vdclab
