#include "vdclab/zoo.hpp"

#include <cmath>

#include "vdclab/error.hpp"

namespace vdclab {

namespace {

CharVector e(std::initializer_list<std::int64_t> m, Complex c = 1.0) { return CharVector::character(CharIndex(m), c); }

std::vector<ZooEntry> build() {
  const Irrational a = zoo_alpha();
  const Irrational b = zoo_beta();
  const auto id = IntegerSequenceSpec::identity();
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<ZooEntry> z;
  z.push_back({"constant", "f_n = 1 (identity map on T^1)", AffineSystem::identity(1), CharVector::constant(1), id,
               SpectralTag::singular, {}});
  z.push_back({"rotation", "e(x) under x -> x + alpha", AffineSystem::rotation({Phase::of(a)}, "rotation"), e({1}), id,
               SpectralTag::singular, {a}});
  z.push_back({"rotation_beta", "e(x) under x -> x + beta", AffineSystem::rotation({Phase::of(b)}, "rotation_beta"),
               e({1}), id, SpectralTag::singular, {b}});
  z.push_back({"skew_lebesgue", "e(y) under (x, y) -> (x + alpha, y + x)",
               AffineSystem::skew_product(Phase::of(a), "skew"), e({0, 1}), id, SpectralTag::lebesgue, {a}});
  z.push_back({"skew_eigen", "e(x) under (x, y) -> (x + alpha, y + x)", AffineSystem::skew_product(Phase::of(a), "skew"),
               e({1, 0}), id, SpectralTag::singular, {a}});
  z.push_back({"mixed", "(e(x) + e(z))/sqrt2 under rotation x skew product on T^3",
               AffineSystem::product(AffineSystem::rotation({Phase::of(a)}), AffineSystem::skew_product(Phase::of(a))),
               e({1, 0, 0}, r) + e({0, 0, 1}, r), id, SpectralTag::mixed, {a}});
  z.push_back({"weyl_quadratic", "e(x) under x -> x + alpha along k_n = n^2",
               AffineSystem::rotation({Phase::of(a)}, "rotation"), e({1}),
               IntegerSequenceSpec::polynomial_binomial({0, 1, 2}), SpectralTag::lebesgue, {a}});
  z.push_back({"cat_map", "e(x) under the automorphism [[2,1],[1,1]]",
               AffineSystem(IntMatrix::from_rows({{2, 1}, {1, 1}}), {Phase{}, Phase{}}, "cat"), e({1, 0}), id,
               SpectralTag::lebesgue, {}});
  for (auto& entry : z) entry.T = AffineSystem(entry.T.matrix(), entry.T.translation(), entry.name);
  return z;
}

}  // namespace

const std::vector<ZooEntry>& zoo() {
  static const std::vector<ZooEntry> z = build();
  return z;
}

const ZooEntry& zoo_entry(std::string_view name) {
  for (const auto& e : zoo()) {
    if (e.name == name) return e;
  }
  throw DomainError("unknown zoo entry '" + std::string(name) + "'");
}

}  // namespace vdclab
