#include "vdclab/char_vector.hpp"

#include <algorithm>

#include "vdclab/error.hpp"
#include "vdclab/numeric.hpp"

namespace vdclab {

CharVector CharVector::character(CharIndex m, Complex c) {
  CharVector out;
  if (c != Complex{0.0, 0.0}) out.terms_.emplace_back(std::move(m), c);
  return out;
}

CharVector CharVector::constant(std::size_t dim, Complex c, const PrimeSet& primes) {
  return character(CharIndex::zero(dim, primes), c);
}

CharVector CharVector::from_terms(std::vector<Term> terms) {
  const auto less = [](const Term& a, const Term& b) { return a.first < b.first; };
  if (!std::is_sorted(terms.begin(), terms.end(), less)) std::stable_sort(terms.begin(), terms.end(), less);
  CharVector out;
  out.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().first == t.first) {
      out.terms_.back().second += t.second;
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(out.terms_, [](const Term& t) { return t.second == Complex{0.0, 0.0}; });
  return out;
}

Complex CharVector::coeff(const CharIndex& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const CharIndex& key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return {0.0, 0.0};
}

Complex CharVector::mean() const {
  for (const auto& [m, c] : terms_) {
    if (m.is_zero()) return c;
  }
  return {0.0, 0.0};
}

double CharVector::norm2() const {
  KahanSum acc;
  for (const auto& t : terms_) acc += std::norm(t.second);
  return acc.value();
}

double CharVector::norm() const { return std::sqrt(norm2()); }

CharVector CharVector::scaled(Complex c) const {
  if (c == Complex{0.0, 0.0}) return {};
  CharVector out = *this;
  for (auto& t : out.terms_) t.second *= c;
  std::erase_if(out.terms_, [](const Term& t) { return t.second == Complex{0.0, 0.0}; });
  return out;
}

CharVector CharVector::conj() const {
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [m, c] : terms_) terms.emplace_back(-m, std::conj(c));
  return from_terms(std::move(terms));
}

CharVector CharVector::pruned(double eps) const {
  CharVector out = *this;
  std::erase_if(out.terms_, [eps](const Term& t) { return std::abs(t.second) <= eps; });
  return out;
}

std::string CharVector::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")e" + m.to_string();
  }
  return out;
}

Complex char_inner(const CharVector& u, const CharVector& v) {
  // Both sides sorted: merge walk.
  ComplexKahanSum acc;
  auto a = u.terms().begin();
  auto b = v.terms().begin();
  while (a != u.terms().end() && b != v.terms().end()) {
    if (a->first == b->first) {
      acc += a->second * std::conj(b->second);
      ++a;
      ++b;
    } else if (a->first < b->first) {
      ++a;
    } else {
      ++b;
    }
  }
  return acc.value();
}

CharVector char_combine(std::span<const std::pair<Complex, CharVector>> terms) {
  std::vector<CharVector::Term> all;
  for (const auto& [a, v] : terms) {
    if (a == Complex{0.0, 0.0}) continue;
    for (const auto& [m, c] : v.terms()) all.emplace_back(m, a * c);
  }
  return CharVector::from_terms(std::move(all));
}

CharVector operator+(const CharVector& u, const CharVector& v) {
  const std::pair<Complex, CharVector> t[] = {{1.0, u}, {1.0, v}};
  return char_combine(t);
}

CharVector operator-(const CharVector& u, const CharVector& v) {
  const std::pair<Complex, CharVector> t[] = {{1.0, u}, {-1.0, v}};
  return char_combine(t);
}

CharVector char_mul(const CharVector& u, const CharVector& v) {
  std::vector<CharVector::Term> all;
  all.reserve(u.size() * v.size());
  for (const auto& [mu, cu] : u.terms())
    for (const auto& [mv, cv] : v.terms()) all.emplace_back(mu + mv, cu * cv);
  return CharVector::from_terms(std::move(all));
}

}  // namespace vdclab
