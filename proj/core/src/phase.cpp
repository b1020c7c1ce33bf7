#include "vdclab/phase.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <numeric>

#include "vdclab/checked.hpp"
#include "vdclab/error.hpp"

namespace vdclab {

namespace detail {
struct Symbol {
  std::string label;
  Turns value;
};
}  // namespace detail

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

auto& registry() {
  static std::map<std::pair<std::string, Turns>, std::unique_ptr<detail::Symbol>> r;
  return r;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string strip(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

}  // namespace

Irrational Irrational::make(std::string_view label, Turns value) {
  if (!is_identifier(label)) throw DomainError("irrational label must be an identifier: '" + std::string(label) + "'");
  std::lock_guard lock(registry_mutex());
  auto key = std::make_pair(std::string(label), value);
  auto& slot = registry()[key];
  if (!slot) slot = std::make_unique<detail::Symbol>(detail::Symbol{std::string(label), value});
  return Irrational(slot.get());
}

const std::string& Irrational::label() const { return sym_->label; }
Turns Irrational::value() const { return sym_->value; }

std::strong_ordering operator<=>(Irrational a, Irrational b) {
  if (a.sym_ == b.sym_) return std::strong_ordering::equal;
  if (auto c = a.label() <=> b.label(); c != 0) return c;
  return a.value() <=> b.value();
}

Irrational zoo_alpha() { return Irrational::make("alpha", parse_turns("sqrt2-1")); }
Irrational zoo_beta() { return Irrational::make("beta", parse_turns("golden-1")); }
Irrational zoo_gamma() { return Irrational::make("gamma", parse_turns("sqrt3-1")); }

// ---------------------------------------------------------------- Rational

Rational Rational::make(i128 num, i128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{checked::narrow<std::int64_t>(num, "rational numerator"),
                  checked::narrow<std::int64_t>(den, "rational denominator")};
}

Rational Rational::parse(std::string_view text) {
  const std::string s = strip(text);
  if (s.empty()) throw DomainError("empty rational literal");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return make(parse_i128(s.substr(0, slash)), parse_i128(s.substr(slash + 1)));
  }
  if (const auto point = s.find('.'); point != std::string::npos) {
    const std::string digits = s.substr(0, point) + s.substr(point + 1);
    const std::size_t places = s.size() - point - 1;
    if (places > 18) throw DomainError("decimal literal has too many places: " + s);
    i128 den = 1;
    for (std::size_t i = 0; i < places; ++i) den *= 10;
    if (digits == "-" || digits == "+" || digits.empty()) throw DomainError("bad rational literal: " + s);
    return make(parse_i128(digits), den);
  }
  return make(parse_i128(s), 1);
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = static_cast<i128>(a.num) * b.den;
  const i128 rhs = static_cast<i128>(b.num) * a.den;
  return lhs <=> rhs;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                        static_cast<i128>(a.den) * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num) * b.den - static_cast<i128>(b.num) * a.den,
                        static_cast<i128>(a.den) * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}

// ---------------------------------------------------------------- Phase

Phase Phase::rational(std::int64_t num, std::int64_t den) {
  const Rational r = Rational::make(num, den);
  Phase p;
  p.den_ = r.den;
  p.num_ = r.num % r.den;
  if (p.num_ < 0) p.num_ += r.den;
  if (p.num_ == 0) p.den_ = 1;
  return p;
}

Phase Phase::of(Irrational x, i128 coeff) {
  Phase p;
  p.add_term(x, coeff);
  return p;
}

void Phase::add_term(Irrational x, i128 c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), x,
                             [](const Term& t, Irrational key) { return t.first < key; });
  if (it != terms_.end() && it->first == x) {
    it->second = checked::add(it->second, c, "phase coefficient");
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{x, c});
  }
}

Phase& Phase::operator+=(const Phase& other) {
  if (other.num_ != 0) {
    if (num_ == 0) {
      num_ = other.num_;
      den_ = other.den_;
    } else {
      const i128 den = static_cast<i128>(den_) / gcd128(den_, other.den_) * other.den_;
      const i128 num = static_cast<i128>(num_) * (den / den_) + static_cast<i128>(other.num_) * (den / other.den_);
      const Rational r = Rational::make(num % den, den);
      num_ = r.num;
      den_ = r.den;
      if (num_ == 0) den_ = 1;
    }
  }
  for (const auto& [x, c] : other.terms_) add_term(x, c);
  return *this;
}

Phase Phase::operator+(const Phase& other) const {
  Phase out = *this;
  out += other;
  return out;
}

Phase Phase::operator-() const {
  Phase out;
  if (num_ != 0) {
    out.num_ = den_ - num_;
    out.den_ = den_;
  }
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.second = checked::sub(i128{0}, t.second, "phase negation");
  return out;
}

Phase Phase::operator-(const Phase& other) const { return *this + (-other); }

Phase Phase::scaled(i128 k) const {
  Phase out;
  if (k == 0) return out;
  if (num_ != 0) {
    i128 km = k % den_;
    if (km < 0) km += den_;
    const i128 num = (km * num_) % den_;
    if (num != 0) {
      const Rational r = Rational::make(num, den_);
      out.num_ = r.num;
      out.den_ = r.den;
    }
  }
  out.terms_ = terms_;
  for (auto& t : out.terms_) {
    i128 r;
    if (__builtin_mul_overflow(t.second, k, &r)) {
      throw OverflowError("multiplier " + i128_to_string(k) + " overflows the 128-bit coefficient of '" +
                          t.first.label() + "' (coefficient " + i128_to_string(t.second) + ")");
    }
    t.second = r;
  }
  return out;
}

Turns Phase::turns() const {
  Turns acc = (num_ == 0) ? Turns{0} : turns_from_ratio(num_, den_);
  for (const auto& [x, c] : terms_) acc += mul_turns(c, x.value());
  return acc;
}

std::string Phase::to_string() const {
  std::string out;
  if (num_ != 0) out = std::to_string(num_) + "/" + std::to_string(den_);
  for (const auto& [x, c] : terms_) {
    if (c < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    const i128 mag = c < 0 ? -c : c;
    if (mag != 1) out += i128_to_string(mag) + "*";
    out += x.label();
  }
  return out.empty() ? "0" : out;
}

bool operator==(const Phase& a, const Phase& b) {
  return a.num_ == b.num_ && a.den_ == b.den_ && a.terms_ == b.terms_;
}

Phase Phase::parse(std::string_view text, const SymbolTable& symbols) {
  const std::string s = strip(text);
  if (s.empty()) throw DomainError("empty phase expression");
  Phase out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
      neg = s[pos] == '-';
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    const std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw DomainError("malformed phase expression: '" + s + "'");
    pos = end;

    std::string coeff_text = "1";
    std::string name = term;
    if (const auto star = term.find('*'); star != std::string::npos) {
      coeff_text = term.substr(0, star);
      name = term.substr(star + 1);
    }
    if (is_identifier(name)) {
      auto it = symbols.find(name);
      if (it == symbols.end()) throw DomainError("undeclared irrational symbol '" + name + "'");
      i128 c = parse_i128(coeff_text);
      out += Phase::of(it->second, neg ? -c : c);
    } else {
      if (term.find('*') != std::string::npos) throw DomainError("malformed phase term '" + term + "'");
      const Rational r = Rational::parse(term);
      out += Phase::rational(neg ? -r.num : r.num, r.den);
    }
  }
  return out;
}

}  // namespace vdclab
