#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vdclab/affine_system.hpp"
#include "vdclab/orbit.hpp"
#include "vdclab/spectral.hpp"

namespace vdclab {

/// A labeled orbit f_n = f o T^{k_n} with its known spectral type.
struct ZooEntry {
  std::string name;
  std::string description;
  AffineSystem T;
  CharVector f;
  IntegerSequenceSpec k;
  SpectralTag expected;
  /// Irrationals whose lattice contains the atoms, if any.
  std::vector<Irrational> lattice;

  OrbitPtr orbit() const { return system_orbit(T, f, k); }
};

/// constant, rotation, rotation_beta, skew_lebesgue, skew_eigen, mixed,
/// weyl_quadratic, cat_map.
const std::vector<ZooEntry>& zoo();
/// Throws DomainError for an unknown name.
const ZooEntry& zoo_entry(std::string_view name);

}  // namespace vdclab
