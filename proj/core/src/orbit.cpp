#include "vdclab/orbit.hpp"

#include <utility>

#include "vdclab/error.hpp"

namespace vdclab {

void Orbit::fill(std::int64_t first, std::size_t count, std::vector<CharVector>& out) const {
  out.clear();
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(at(first + static_cast<std::int64_t>(i)));
}

namespace {

class SystemOrbit final : public Orbit {
 public:
  SystemOrbit(AffineSystem T, CharVector f, IntegerSequenceSpec k)
      : T_(std::move(T)), f_(std::move(f)), k_(std::move(k)), identity_(k_ == IntegerSequenceSpec::identity()) {}

  std::size_t dim() const override { return T_.dim(); }

  CharVector at(std::int64_t n) const override {
    if (T_.is_rotation() && !identity_) {
      // Indices are fixed; only the phase k_n m.b moves, exact for 128-bit k_n.
      const i128 k = seq_eval(k_, n);
      std::vector<CharVector::Term> terms;
      terms.reserve(f_.size());
      for (const auto& [m, c] : f_.terms()) {
        terms.emplace_back(m, c * unit_phase(mul_turns(k, character_phase_turns(m, T_.translation()))));
      }
      return CharVector::from_terms(std::move(terms));
    }
    return pushforward(T_, f_, checked_exponent(n));
  }

  void fill(std::int64_t first, std::size_t count, std::vector<CharVector>& out) const override {
    if (!identity_) {
      Orbit::fill(first, count, out);
      return;
    }
    out.clear();
    out.reserve(count);
    if (count == 0) return;
    // Seed with the exact closed form, then step: the index moves by A^T and
    // the phase gains m.b, both exact.
    struct State {
      CharIndex m;
      Complex c;
      Turns phase;
    };
    std::vector<State> state;
    const auto& b = T_.translation();
    const IntMatrix At = T_.matrix().transpose();
    const bool rotation = T_.is_rotation();
    const std::vector<Phase> bn = translation_power(T_, first);
    for (const auto& [m, c] : f_.terms()) {
      CharIndex mn = rotation ? m : m.transformed(At, first);
      // Phase of e_m o T^first is m.b_first.
      state.push_back({std::move(mn), c, character_phase_turns(m, bn)});
    }
    std::vector<Turns> bt;
    for (const auto& ph : b) bt.push_back(ph.turns());
    const bool zero_b = T_.has_zero_translation();
    std::vector<CharVector::Term> terms;
    for (std::size_t i = 0; i < count; ++i) {
      terms.clear();
      for (const auto& s : state) terms.emplace_back(s.m, s.c * unit_phase(s.phase));
      out.push_back(CharVector::from_terms(terms));
      if (i + 1 == count) break;
      for (auto& s : state) {
        // e_m o T^{n+1} = e_{A^T m} o T^n shifted by m.b; apply on the current index.
        if (zero_b) {
        } else if (s.m.rep() == CharIndex::Rep::small) {
          const auto m = s.m.small();
          for (std::size_t j = 0; j < m.size(); ++j) s.phase += mul_turns(m[j], bt[j]);
        } else {
          s.phase += character_phase_turns(s.m, b);
        }
        if (!rotation) s.m = s.m.transformed(At, 1);
      }
    }
  }

  std::string describe() const override {
    return "orbit(" + (T_.label().empty() ? std::string("T") : T_.label()) + ", " + f_.to_string() + ", " +
           k_.describe() + ")";
  }

 private:
  std::int64_t checked_exponent(std::int64_t n) const {
    if (identity_) return n;
    const i128 k = seq_eval(k_, n);
    if (k > INT64_MAX || k < INT64_MIN) {
      throw OverflowError("exponent k_n=" + i128_to_string(k) + " at n=" + std::to_string(n) + " leaves 64 bits");
    }
    return static_cast<std::int64_t>(k);
  }

  AffineSystem T_;
  CharVector f_;
  IntegerSequenceSpec k_;
  bool identity_;
};

class ScaledOrbit final : public Orbit {
 public:
  ScaledOrbit(WeightsPtr c, OrbitPtr g) : c_(std::move(c)), g_(std::move(g)) {}
  std::size_t dim() const override { return g_->dim(); }
  CharVector at(std::int64_t n) const override { return g_->at(n).scaled(c_->at(n)); }
  void fill(std::int64_t first, std::size_t count, std::vector<CharVector>& out) const override {
    g_->fill(first, count, out);
    for (std::size_t i = 0; i < count; ++i) out[i] = out[i].scaled(c_->at(first + static_cast<std::int64_t>(i)));
  }
  std::string describe() const override { return c_->describe() + " * " + g_->describe(); }

 private:
  WeightsPtr c_;
  OrbitPtr g_;
};

class SumOrbit final : public Orbit {
 public:
  explicit SumOrbit(std::vector<std::pair<Complex, OrbitPtr>> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("sum_orbit needs at least one part");
    for (const auto& p : parts_) {
      if (p.second->dim() != parts_.front().second->dim()) throw DomainError("sum_orbit parts differ in dimension");
    }
  }
  std::size_t dim() const override { return parts_.front().second->dim(); }
  CharVector at(std::int64_t n) const override {
    std::vector<std::pair<Complex, CharVector>> terms;
    for (const auto& [a, g] : parts_) terms.emplace_back(a, g->at(n));
    return char_combine(terms);
  }
  void fill(std::int64_t first, std::size_t count, std::vector<CharVector>& out) const override {
    std::vector<std::vector<CharVector>> cols(parts_.size());
    for (std::size_t j = 0; j < parts_.size(); ++j) parts_[j].second->fill(first, count, cols[j]);
    out.clear();
    out.reserve(count);
    std::vector<std::pair<Complex, CharVector>> terms;
    for (std::size_t i = 0; i < count; ++i) {
      terms.clear();
      for (std::size_t j = 0; j < parts_.size(); ++j) terms.emplace_back(parts_[j].first, std::move(cols[j][i]));
      out.push_back(char_combine(terms));
    }
  }
  std::string describe() const override {
    std::string s = "sum(";
    for (std::size_t j = 0; j < parts_.size(); ++j) s += (j ? ", " : "") + parts_[j].second->describe();
    return s + ")";
  }

 private:
  std::vector<std::pair<Complex, OrbitPtr>> parts_;
};

class ProductOrbit final : public Orbit {
 public:
  explicit ProductOrbit(std::vector<OrbitPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw DomainError("product_orbit needs at least one factor");
    for (const auto& f : factors_) {
      if (f->dim() != factors_.front()->dim()) throw DomainError("product_orbit factors differ in dimension");
    }
  }
  std::size_t dim() const override { return factors_.front()->dim(); }
  CharVector at(std::int64_t n) const override {
    CharVector acc = factors_.front()->at(n);
    for (std::size_t j = 1; j < factors_.size(); ++j) acc = char_mul(acc, factors_[j]->at(n));
    return acc;
  }
  void fill(std::int64_t first, std::size_t count, std::vector<CharVector>& out) const override {
    factors_.front()->fill(first, count, out);
    std::vector<CharVector> col;
    for (std::size_t j = 1; j < factors_.size(); ++j) {
      factors_[j]->fill(first, count, col);
      for (std::size_t i = 0; i < count; ++i) out[i] = char_mul(out[i], col[i]);
    }
  }
  std::string describe() const override {
    std::string s = "product(";
    for (std::size_t j = 0; j < factors_.size(); ++j) s += (j ? ", " : "") + factors_[j]->describe();
    return s + ")";
  }

 private:
  std::vector<OrbitPtr> factors_;
};

class PhaseWeights final : public Weights {
 public:
  PhaseWeights(IntegerSequenceSpec k, Phase x, Complex a) : k_(std::move(k)), x_(x.turns()), label_(x.to_string()), a_(a) {}
  Complex at(std::int64_t n) const override { return a_ * unit_phase(mul_turns(seq_eval(k_, n), x_)); }
  std::string describe() const override { return "e(" + k_.describe() + " * " + label_ + ")"; }

 private:
  IntegerSequenceSpec k_;
  Turns x_;
  std::string label_;
  Complex a_;
};

class ConstantWeights final : public Weights {
 public:
  explicit ConstantWeights(Complex c) : c_(c) {}
  Complex at(std::int64_t) const override { return c_; }
  std::string describe() const override { return "const"; }

 private:
  Complex c_;
};

class WeightsOrbit final : public Orbit {
 public:
  explicit WeightsOrbit(WeightsPtr c) : c_(std::move(c)) {}
  std::size_t dim() const override { return 1; }
  CharVector at(std::int64_t n) const override { return CharVector::constant(1, c_->at(n)); }
  std::string describe() const override { return c_->describe() + " e_0"; }

 private:
  WeightsPtr c_;
};

}  // namespace

OrbitPtr system_orbit(AffineSystem T, CharVector f, IntegerSequenceSpec k) {
  return std::make_shared<SystemOrbit>(std::move(T), std::move(f), std::move(k));
}
OrbitPtr scaled_orbit(WeightsPtr c, OrbitPtr g) { return std::make_shared<ScaledOrbit>(std::move(c), std::move(g)); }
OrbitPtr sum_orbit(std::vector<std::pair<Complex, OrbitPtr>> parts) {
  return std::make_shared<SumOrbit>(std::move(parts));
}
OrbitPtr product_orbit(std::vector<OrbitPtr> factors) { return std::make_shared<ProductOrbit>(std::move(factors)); }
WeightsPtr phase_weights(IntegerSequenceSpec k, Phase x, Complex amplitude) {
  return std::make_shared<PhaseWeights>(std::move(k), std::move(x), amplitude);
}
WeightsPtr constant_weights(Complex c) { return std::make_shared<ConstantWeights>(c); }
OrbitPtr weights_as_orbit(WeightsPtr c) { return std::make_shared<WeightsOrbit>(std::move(c)); }

}  // namespace vdclab
