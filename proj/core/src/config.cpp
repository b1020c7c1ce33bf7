#include "vdclab/config.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "vdclab/zoo.hpp"

namespace vdclab {

using nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& v) {
  std::string out = "invalid config:";
  for (const auto& s : v) out += "\n  " + s;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join_lines(violations)), violations_(std::move(violations)) {}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"vdc_suite", "weighted_vdc", "orthogonality", "nf",
                                              "recurrence", "rk", "counterexample", "single_T", "T1T2"};
  return names;
}

namespace {

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  std::vector<std::string> errors;
  SymbolTable symbols;
  json root;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  /// Rejects unknown keys and reports missing required ones.
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed,
              std::initializer_list<const char*> required = {}) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        fail(path, "unknown key '" + k + "'");
      }
    }
    bool ok = true;
    for (const char* r : required) {
      if (!j.contains(r)) {
        fail(path, "missing key '" + std::string(r) + "'");
        ok = false;
      }
    }
    return ok;
  }

  std::int64_t integer(const json& j, const std::string& path, std::int64_t fallback = 0) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    fail(path, "expected an integer");
    return fallback;
  }

  i128 big_integer(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) {
      try {
        return parse_i128(j.get<std::string>());
      } catch (const Error& e) {
        fail(path, e.what());
        return 0;
      }
    }
    fail(path, "expected an integer or integer string");
    return 0;
  }

  double number(const json& j, const std::string& path, double fallback = 0.0) {
    if (j.is_number()) return j.get<double>();
    fail(path, "expected a number");
    return fallback;
  }

  bool boolean(const json& j, const std::string& path) {
    if (j.is_boolean()) return j.get<bool>();
    fail(path, "expected true or false");
    return false;
  }

  std::string string(const json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    fail(path, "expected a string");
    return {};
  }

  Rational rational(const json& j, const std::string& path) {
    try {
      if (j.is_number_integer()) return Rational{j.get<std::int64_t>(), 1};
      if (j.is_string()) return Rational::parse(j.get<std::string>());
      fail(path, "expected a rational such as \"1/4\"");
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return {};
  }

  Complex complex(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(path, "expected a number or [re, im]");
    return 0.0;
  }

  Phase phase(const json& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "expected a phase expression string");
      return {};
    }
    try {
      return Phase::parse(j.get<std::string>(), symbols);
    } catch (const Error& e) {
      fail(path, e.what());
      return {};
    }
  }

  Irrational irrational(const json& j, const std::string& path) {
    const std::string name = string(j, path);
    auto it = symbols.find(name);
    if (it == symbols.end()) {
      if (!name.empty()) fail(path, "undeclared irrational symbol '" + name + "'");
      return zoo_alpha();
    }
    return it->second;
  }

  template <class T>
  std::vector<T> list(const json& j, const std::string& path, std::function<T(const json&, const std::string&)> item) {
    std::vector<T> out;
    if (!j.is_array()) {
      fail(path, "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  // A reference is a name in the given root table or an inline definition.
  const json* resolve(const json& j, const char* table, const std::string& path, std::string& where) {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (!root.contains(table) || !root[table].is_object() || !root[table].contains(name)) {
        fail(path, std::string("unknown ") + table + " entry '" + name + "'");
        return nullptr;
      }
      where = std::string(table) + "." + name;
      return &root[table][name];
    }
    where = path;
    return &j;
  }

  AffineSystem system(const json& ref, const std::string& path) {
    std::string where;
    const json* j = resolve(ref, "systems", path, where);
    if (!j || !object(*j, where, {"matrix", "translation", "label"})) return AffineSystem::identity(1);
    std::vector<Phase> b;
    if (j->contains("translation")) {
      b = list<Phase>((*j)["translation"], where + ".translation",
                      [&](const json& x, const std::string& p) { return phase(x, p); });
    }
    std::vector<std::vector<std::int64_t>> rows;
    if (j->contains("matrix")) {
      const json& m = (*j)["matrix"];
      rows = list<std::vector<std::int64_t>>(m, where + ".matrix", [&](const json& r, const std::string& p) {
        return list<std::int64_t>(r, p, [&](const json& x, const std::string& q) { return integer(x, q); });
      });
    } else {
      rows = IntMatrix::identity(b.size()).rows();
    }
    if (!j->contains("translation")) b.assign(rows.size(), Phase{});
    const std::string label = j->contains("label") ? string((*j)["label"], where + ".label") : std::string();
    if (rows.empty()) {
      fail(where, "system needs a matrix or a translation");
      return AffineSystem::identity(1);
    }
    for (const auto& r : rows) {
      if (r.size() != rows.size()) {
        fail(where + ".matrix", "matrix is not square");
        return AffineSystem::identity(1);
      }
    }
    try {
      return AffineSystem(IntMatrix::from_rows(rows), b, label);
    } catch (const Error& e) {
      fail(where, e.what());
      return AffineSystem::identity(rows.size());
    }
  }

  CharVector observable(const json& ref, const std::string& path) {
    std::string where;
    const json* j = resolve(ref, "observables", path, where);
    if (!j || !object(*j, where, {"terms"}, {"terms"})) return {};
    std::vector<CharVector::Term> terms;
    const json& ts = (*j)["terms"];
    if (!ts.is_array()) {
      fail(where + ".terms", "expected an array");
      return {};
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string p = where + ".terms[" + std::to_string(i) + "]";
      if (!object(ts[i], p, {"index", "coeff"}, {"index"})) continue;
      const auto idx = list<std::int64_t>(ts[i]["index"], p + ".index",
                                          [&](const json& x, const std::string& q) { return integer(x, q); });
      const Complex c = ts[i].contains("coeff") ? complex(ts[i]["coeff"], p + ".coeff") : Complex(1.0);
      if (idx.empty()) {
        fail(p + ".index", "empty index");
        continue;
      }
      terms.emplace_back(CharIndex(idx), c);
    }
    for (const auto& t : terms) {
      if (t.first.dim() != terms.front().first.dim()) {
        fail(where, "terms have different dimensions");
        return {};
      }
    }
    return CharVector::from_terms(std::move(terms));
  }

  IntegerSequenceSpec sequence(const json& ref, const std::string& path) {
    std::string where;
    const json* j = resolve(ref, "sequences", path, where);
    if (!j || !object(*j, where, {"polynomial", "binomial", "floor_power", "table"})) {
      return IntegerSequenceSpec::identity();
    }
    if (j->size() != 1) {
      fail(where, "give exactly one of polynomial, binomial, floor_power, table");
      return IntegerSequenceSpec::identity();
    }
    try {
      if (j->contains("polynomial")) {
        const auto c = list<Rational>((*j)["polynomial"], where + ".polynomial",
                                      [&](const json& x, const std::string& p) { return rational(x, p); });
        return IntegerSequenceSpec::polynomial_monomial(c);
      }
      if (j->contains("binomial")) {
        const auto c = list<i128>((*j)["binomial"], where + ".binomial",
                                  [&](const json& x, const std::string& p) { return big_integer(x, p); });
        return IntegerSequenceSpec::polynomial_binomial(c);
      }
      if (j->contains("table")) {
        const auto c = list<i128>((*j)["table"], where + ".table",
                                  [&](const json& x, const std::string& p) { return big_integer(x, p); });
        return IntegerSequenceSpec::table(c);
      }
      const json& fp = (*j)["floor_power"];
      if (fp.is_string()) return IntegerSequenceSpec::floor_power(fp.get<std::string>());
      if (object(fp, where + ".floor_power", {"integer", "fraction"}, {"integer", "fraction"})) {
        return IntegerSequenceSpec::floor_power(integer(fp["integer"], where + ".floor_power.integer"),
                                                parse_turns(string(fp["fraction"], where + ".floor_power.fraction")));
      }
    } catch (const Error& e) {
      fail(where, e.what());
    }
    return IntegerSequenceSpec::identity();
  }

  OrbitSpec orbit(const json& j, const std::string& path) {
    if (j.is_object() && j.contains("zoo")) {
      if (!object(j, path, {"zoo"})) return {};
      const std::string name = string(j["zoo"], path + ".zoo");
      try {
        const ZooEntry& z = zoo_entry(name);
        for (const auto& x : z.lattice) declare(x, path);
        for (const auto& b : z.T.translation()) {
          for (const auto& [x, c] : b.terms()) declare(x, path);
        }
        return OrbitSpec::from_zoo(z);
      } catch (const DomainError& e) {
        fail(path + ".zoo", e.what());
        return {};
      }
    }
    if (!object(j, path, {"system", "observable", "sequence"}, {"system", "observable"})) return {};
    OrbitSpec o{system(j["system"], path + ".system"), observable(j["observable"], path + ".observable")};
    if (j.contains("sequence")) o.k = sequence(j["sequence"], path + ".sequence");
    check_dims(o.T, o.f, path);
    return o;
  }

  void check_dims(const AffineSystem& T, const CharVector& f, const std::string& path) {
    if (!f.empty() && f.terms().front().first.dim() != T.dim()) {
      fail(path, "observable dimension " + std::to_string(f.terms().front().first.dim()) +
                     " differs from system dimension " + std::to_string(T.dim()));
    }
  }

  void declare(Irrational x, const std::string& path) {
    auto [it, fresh] = symbols.emplace(x.label(), x);
    if (!fresh && !(it->second == x)) {
      fail(path, "symbol '" + x.label() + "' is declared with a value different from the zoo's");
    }
  }

  BoxUnion boxes(const json& j, const std::string& path) {
    return list<Box>(j, path, [&](const json& b, const std::string& p) {
      return Box{list<Arc>(b, p, [&](const json& a, const std::string& q) { return arc(a, q); })};
    });
  }

  Arc arc(const json& a, const std::string& path) {
    if (a.is_string() && a.get<std::string>() == "full") return Arc::whole();
    if (a.is_array() && a.size() == 2) {
      const Rational lo = rational(a[0], path + "[0]");
      const Rational hi = rational(a[1], path + "[1]");
      try {
        return Arc::from_rationals(lo, hi);
      } catch (const Error& e) {
        fail(path, e.what());
        return {};
      }
    }
    if (a.is_object() && object(a, path, {"lo", "width"}, {"lo", "width"})) {
      try {
        return {parse_turns(string(a["lo"], path + ".lo")), parse_turns(string(a["width"], path + ".width")), false};
      } catch (const Error& e) {
        fail(path, e.what());
        return {};
      }
    }
    fail(path, "expected \"full\", [lo, hi] or {lo, width}");
    return {};
  }

  void check_box_dims(const BoxUnion& A, std::size_t d, const std::string& path) {
    for (const auto& b : A) {
      if (b.sides.size() != d) {
        fail(path, "box has " + std::to_string(b.sides.size()) + " sides on a " + std::to_string(d) + "-torus");
        return;
      }
    }
  }

  Schedule schedule(const json& j, const std::string& path) {
    try {
      if (j.is_array()) {
        return Schedule(list<std::int64_t>(j, path, [&](const json& x, const std::string& p) { return integer(x, p); }));
      }
      if (object(j, path, {"geometric", "base"}, {"geometric"})) {
        const std::int64_t base = j.contains("base") ? integer(j["base"], path + ".base", 1000) : 1000;
        return Schedule::geometric(integer(j["geometric"], path + ".geometric", 100000), base);
      }
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return Schedule::geometric(100000);
  }

  Thresholds thresholds(const json& j, const std::string& path) {
    Thresholds t;
    if (!object(j, path, {"w_tol", "l2_eps_rel", "s_tol", "tol_neg", "tol_int", "atom_min_rel", "stability_factor", "H",
                          "G", "lattice_K", "rational_den"})) {
      return t;
    }
    auto num = [&](const char* k, double& v) {
      if (j.contains(k)) v = number(j[k], path + "." + k, v);
    };
    auto whole = [&](const char* k, std::int64_t& v) {
      if (j.contains(k)) v = integer(j[k], path + "." + k, v);
    };
    num("w_tol", t.w_tol);
    num("l2_eps_rel", t.l2_eps_rel);
    num("s_tol", t.s_tol);
    num("tol_neg", t.tol_neg);
    num("tol_int", t.tol_int);
    num("atom_min_rel", t.atom_min_rel);
    num("stability_factor", t.stability_factor);
    whole("H", t.H);
    whole("G", t.G);
    whole("lattice_K", t.lattice_K);
    whole("rational_den", t.rational_den);
    return t;
  }

  // Optional scalar fields.
  void opt(const json& j, const char* k, const std::string& path, double& v) {
    if (j.contains(k)) v = number(j[k], path + "." + k, v);
  }
  void opt(const json& j, const char* k, const std::string& path, std::int64_t& v) {
    if (j.contains(k)) v = integer(j[k], path + "." + k, v);
  }
  void opt(const json& j, const char* k, const std::string& path, bool& v) {
    if (j.contains(k)) v = boolean(j[k], path + "." + k);
  }

  std::vector<AffineSystem> systems(const json& j, const std::string& path) {
    return list<AffineSystem>(j, path, [&](const json& x, const std::string& p) { return system(x, p); });
  }
  std::vector<CharVector> observables(const json& j, const std::string& path) {
    return list<CharVector>(j, path, [&](const json& x, const std::string& p) { return observable(x, p); });
  }
  std::vector<IntegerSequenceSpec> sequences(const json& j, const std::string& path) {
    return list<IntegerSequenceSpec>(j, path, [&](const json& x, const std::string& p) { return sequence(x, p); });
  }

  ExperimentParams params(const std::string& name, const json& j) {
    const std::string P = "params";
    if (name == "vdc_suite") {
      VdcSuiteParams p;
      if (!object(j, P, {"orbit", "H", "hypothesis_tol", "conclusion_tol"}, {"orbit"})) return p;
      p.orbit = orbit(j["orbit"], P + ".orbit");
      opt(j, "H", P, p.H);
      opt(j, "hypothesis_tol", P, p.hypothesis_tol);
      opt(j, "conclusion_tol", P, p.conclusion_tol);
      return p;
    }
    if (name == "weighted_vdc") {
      WeightedVdcParams p;
      if (!object(j, P, {"orbit", "weight", "tol"}, {"orbit", "weight"})) return p;
      p.orbit = orbit(j["orbit"], P + ".orbit");
      const json& w = j["weight"];
      if (object(w, P + ".weight", {"sequence", "phase", "amplitude"}, {"phase"})) {
        if (w.contains("sequence")) p.weight.k = sequence(w["sequence"], P + ".weight.sequence");
        p.weight.x = phase(w["phase"], P + ".weight.phase");
        if (w.contains("amplitude")) p.weight.amplitude = complex(w["amplitude"], P + ".weight.amplitude");
      }
      opt(j, "tol", P, p.tol);
      return p;
    }
    if (name == "orthogonality") {
      OrthogonalityParams p;
      if (!object(j, P, {"f", "g", "tol"}, {"f", "g"})) return p;
      p.f = orbit(j["f"], P + ".f");
      p.g = orbit(j["g"], P + ".g");
      if (p.f.T.dim() != p.g.T.dim()) fail(P, "f and g live on tori of different dimension");
      opt(j, "tol", P, p.tol);
      return p;
    }
    if (name == "nf") {
      NfParams p;
      if (!object(j, P, {"T", "S", "k", "f", "g", "tol", "ud_lags", "ud_tol"}, {"T", "S", "k", "f", "g"})) return p;
      p.T = system(j["T"], P + ".T");
      p.S = system(j["S"], P + ".S");
      p.k = sequence(j["k"], P + ".k");
      p.f = observable(j["f"], P + ".f");
      p.g = observable(j["g"], P + ".g");
      check_dims(p.T, p.f, P + ".f");
      check_dims(p.S, p.g, P + ".g");
      if (p.T.dim() != p.S.dim()) fail(P, "T and S act on tori of different dimension");
      opt(j, "tol", P, p.tol);
      opt(j, "ud_lags", P, p.ud_lags);
      opt(j, "ud_tol", P, p.ud_tol);
      return p;
    }
    if (name == "recurrence") {
      RecurrenceParams p;
      if (!object(j, P, {"T", "S", "k", "A", "tol", "M", "expected_limit", "limit_tol"}, {"T", "S", "k", "A"})) {
        return p;
      }
      p.T = system(j["T"], P + ".T");
      p.S = system(j["S"], P + ".S");
      p.k = sequence(j["k"], P + ".k");
      p.A = boxes(j["A"], P + ".A");
      if (p.T.dim() != p.S.dim()) fail(P, "T and S act on tori of different dimension");
      check_box_dims(p.A, p.T.dim(), P + ".A");
      opt(j, "tol", P, p.tol);
      opt(j, "M", P, p.M);
      if (j.contains("expected_limit")) p.expected_limit = number(j["expected_limit"], P + ".expected_limit");
      opt(j, "limit_tol", P, p.limit_tol);
      return p;
    }
    if (name == "rk") {
      RkParams p;
      if (!object(j, P,
                  {"k", "alpha", "window", "N", "M", "T", "S", "A", "positivity_factor", "non_recurrence",
                   "strip_half_width"},
                  {"alpha", "T", "S", "A"})) {
        return p;
      }
      std::int64_t k = p.rk.k;
      opt(j, "k", P, k);
      p.rk.k = static_cast<int>(k);
      p.rk.alpha = irrational(j["alpha"], P + ".alpha");
      if (j.contains("window")) {
        const auto w = list<Rational>(j["window"], P + ".window",
                                      [&](const json& x, const std::string& q) { return rational(x, q); });
        if (w.size() == 2) {
          p.rk.lo = w[0];
          p.rk.hi = w[1];
        } else {
          fail(P + ".window", "expected [lo, hi]");
        }
      }
      opt(j, "N", P, p.N);
      opt(j, "M", P, p.M);
      p.T = system(j["T"], P + ".T");
      p.S = systems(j["S"], P + ".S");
      p.A = boxes(j["A"], P + ".A");
      check_box_dims(p.A, p.T.dim(), P + ".A");
      for (const auto& S : p.S) {
        if (S.dim() != p.T.dim()) fail(P + ".S", "systems act on tori of different dimension");
      }
      opt(j, "positivity_factor", P, p.positivity_factor);
      opt(j, "non_recurrence", P, p.non_recurrence);
      if (j.contains("strip_half_width")) p.strip_half_width = rational(j["strip_half_width"], P + ".strip_half_width");
      if (p.N < 1) fail(P + ".N", "must be >= 1");
      if (p.M < 1) fail(P + ".M", "must be >= 1");
      return p;
    }
    if (name == "counterexample") {
      CounterexampleParams p;
      if (!object(j, P, {"alpha", "exploratory"})) return p;
      if (j.contains("alpha")) {
        p.alpha = irrational(j["alpha"], P + ".alpha");
      } else {
        declare(p.alpha, P);
      }
      opt(j, "exploratory", P, p.exploratory);
      return p;
    }
    if (name == "single_T") {
      SingleTParams p;
      if (!object(j, P, {"T", "S", "polys", "f", "g", "tol", "independence_lags"}, {"T", "S", "polys", "f", "g"})) {
        return p;
      }
      p.T = system(j["T"], P + ".T");
      p.S = system(j["S"], P + ".S");
      p.polys = sequences(j["polys"], P + ".polys");
      p.f = observable(j["f"], P + ".f");
      p.g = observables(j["g"], P + ".g");
      if (p.polys.size() != p.g.size()) fail(P, "polys and g differ in length");
      check_dims(p.T, p.f, P + ".f");
      for (const auto& g : p.g) check_dims(p.S, g, P + ".g");
      opt(j, "tol", P, p.tol);
      opt(j, "independence_lags", P, p.independence_lags);
      return p;
    }
    T1T2Params p;
    if (!object(j, P, {"T", "R", "S", "W", "polys", "f", "h", "g", "tol", "exhaustive_N", "max_N"},
                {"T", "S", "W", "polys", "f", "g"})) {
      return p;
    }
    p.T = system(j["T"], P + ".T");
    if (j.contains("R")) p.R = systems(j["R"], P + ".R");
    p.S = system(j["S"], P + ".S");
    p.W = system(j["W"], P + ".W");
    p.polys = sequences(j["polys"], P + ".polys");
    p.f = observable(j["f"], P + ".f");
    if (j.contains("h")) p.h = observables(j["h"], P + ".h");
    p.g = observables(j["g"], P + ".g");
    if (p.polys.size() != p.g.size()) fail(P, "polys and g differ in length");
    if (p.R.size() != p.h.size()) fail(P, "R and h differ in length");
    check_dims(p.T, p.f, P + ".f");
    opt(j, "tol", P, p.tol);
    opt(j, "exhaustive_N", P, p.exhaustive_N);
    opt(j, "max_N", P, p.max_N);
    return p;
  }
};

// ---------------------------------------------------------------- serializing

json i128_json(i128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<std::int64_t>(v);
  return i128_to_string(v);
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json system_json(const AffineSystem& T) {
  json j;
  j["matrix"] = T.matrix().rows();
  json b = json::array();
  for (const auto& ph : T.translation()) b.push_back(ph.to_string());
  j["translation"] = b;
  if (!T.label().empty()) j["label"] = T.label();
  return j;
}

json observable_json(const CharVector& f) {
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) {
    if (m.rep() != CharIndex::Rep::small) throw DomainError("only 64-bit observable indices can be serialized");
    terms.push_back({{"index", std::vector<std::int64_t>(m.small().begin(), m.small().end())}, {"coeff", complex_json(c)}});
  }
  return {{"terms", terms}};
}

json sequence_json(const IntegerSequenceSpec& k) {
  json j;
  switch (k.kind()) {
    case IntegerSequenceSpec::Kind::polynomial: {
      json c = json::array();
      for (auto v : k.binomial_coeffs()) c.push_back(i128_json(v));
      j["binomial"] = c;
      break;
    }
    case IntegerSequenceSpec::Kind::table: {
      json c = json::array();
      for (auto v : k.table_values()) c.push_back(i128_json(v));
      j["table"] = c;
      break;
    }
    case IntegerSequenceSpec::Kind::floor_power:
      j["floor_power"] = {{"integer", k.exponent_integer_part()}, {"fraction", turns_to_hex(k.exponent_fraction())}};
      break;
    case IntegerSequenceSpec::Kind::difference:
      throw DomainError("difference sequences are derived, not configured");
  }
  return j;
}

json orbit_json(const OrbitSpec& o) {
  return {{"system", system_json(o.T)}, {"observable", observable_json(o.f)}, {"sequence", sequence_json(o.k)}};
}

json arc_json(const Arc& a) {
  if (a.full) return "full";
  return {{"lo", turns_to_hex(a.lo)}, {"width", turns_to_hex(a.width)}};
}

json boxes_json(const BoxUnion& A) {
  json out = json::array();
  for (const auto& b : A) {
    json box = json::array();
    for (const auto& a : b.sides) box.push_back(arc_json(a));
    out.push_back(box);
  }
  return out;
}

template <class T, class F>
json list_json(const std::vector<T>& v, F f) {
  json out = json::array();
  for (const auto& x : v) out.push_back(f(x));
  return out;
}

json thresholds_json(const Thresholds& t) {
  return {{"w_tol", t.w_tol},
          {"l2_eps_rel", t.l2_eps_rel},
          {"s_tol", t.s_tol},
          {"tol_neg", t.tol_neg},
          {"tol_int", t.tol_int},
          {"atom_min_rel", t.atom_min_rel},
          {"stability_factor", t.stability_factor},
          {"H", t.H},
          {"G", t.G},
          {"lattice_K", t.lattice_K},
          {"rational_den", t.rational_den}};
}

struct ParamsJson {
  json operator()(const VdcSuiteParams& p) const {
    return {{"orbit", orbit_json(p.orbit)}, {"H", p.H}, {"hypothesis_tol", p.hypothesis_tol},
            {"conclusion_tol", p.conclusion_tol}};
  }
  json operator()(const WeightedVdcParams& p) const {
    return {{"orbit", orbit_json(p.orbit)},
            {"weight",
             {{"sequence", sequence_json(p.weight.k)},
              {"phase", p.weight.x.to_string()},
              {"amplitude", complex_json(p.weight.amplitude)}}},
            {"tol", p.tol}};
  }
  json operator()(const OrthogonalityParams& p) const {
    return {{"f", orbit_json(p.f)}, {"g", orbit_json(p.g)}, {"tol", p.tol}};
  }
  json operator()(const NfParams& p) const {
    return {{"T", system_json(p.T)},       {"S", system_json(p.S)}, {"k", sequence_json(p.k)},
            {"f", observable_json(p.f)},   {"g", observable_json(p.g)}, {"tol", p.tol},
            {"ud_lags", p.ud_lags},        {"ud_tol", p.ud_tol}};
  }
  json operator()(const RecurrenceParams& p) const {
    json j{{"T", system_json(p.T)}, {"S", system_json(p.S)}, {"k", sequence_json(p.k)}, {"A", boxes_json(p.A)},
           {"tol", p.tol},          {"M", p.M},               {"limit_tol", p.limit_tol}};
    if (p.expected_limit) j["expected_limit"] = *p.expected_limit;
    return j;
  }
  json operator()(const RkParams& p) const {
    return {{"k", p.rk.k},
            {"alpha", p.rk.alpha.label()},
            {"window", {p.rk.lo.to_string(), p.rk.hi.to_string()}},
            {"N", p.N},
            {"M", p.M},
            {"T", system_json(p.T)},
            {"S", list_json(p.S, system_json)},
            {"A", boxes_json(p.A)},
            {"positivity_factor", p.positivity_factor},
            {"non_recurrence", p.non_recurrence},
            {"strip_half_width", p.strip_half_width.to_string()}};
  }
  json operator()(const CounterexampleParams& p) const {
    return {{"alpha", p.alpha.label()}, {"exploratory", p.exploratory}};
  }
  json operator()(const SingleTParams& p) const {
    return {{"T", system_json(p.T)},
            {"S", system_json(p.S)},
            {"polys", list_json(p.polys, sequence_json)},
            {"f", observable_json(p.f)},
            {"g", list_json(p.g, observable_json)},
            {"tol", p.tol},
            {"independence_lags", p.independence_lags}};
  }
  json operator()(const T1T2Params& p) const {
    return {{"T", system_json(p.T)},
            {"R", list_json(p.R, system_json)},
            {"S", system_json(p.S)},
            {"W", system_json(p.W)},
            {"polys", list_json(p.polys, sequence_json)},
            {"f", observable_json(p.f)},
            {"h", list_json(p.h, observable_json)},
            {"g", list_json(p.g, observable_json)},
            {"tol", p.tol},
            {"exhaustive_N", p.exhaustive_N},
            {"max_N", p.max_N}};
  }
};

}  // namespace

ConfigDocument parse_config(std::string_view text) {
  Parser P;
  try {
    P.root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  const json& root = P.root;
  ConfigDocument doc;
  if (!P.object(root, "$",
                {"experiment", "irrationals", "schedule", "thresholds", "threads", "systems", "observables",
                 "sequences", "params"},
                {"experiment"})) {
    throw ConfigError(P.errors);
  }
  doc.experiment = P.string(root["experiment"], "experiment");
  const auto& names = experiment_names();
  const bool known = std::find(names.begin(), names.end(), doc.experiment) != names.end();
  if (!known) P.fail("experiment", "unknown experiment '" + doc.experiment + "'");

  if (root.contains("irrationals")) {
    const json& irr = root["irrationals"];
    if (!irr.is_object()) {
      P.fail("irrationals", "expected an object of name: value");
    } else {
      for (const auto& [name, v] : irr.items()) {
        try {
          P.symbols.emplace(name, Irrational::make(name, parse_turns(P.string(v, "irrationals." + name))));
        } catch (const Error& e) {
          P.fail("irrationals." + name, e.what());
        }
      }
    }
  }
  for (const char* table : {"systems", "observables", "sequences"}) {
    if (root.contains(table) && !root[table].is_object()) P.fail(table, "expected an object of named definitions");
  }
  if (root.contains("schedule")) doc.options.schedule = P.schedule(root["schedule"], "schedule");
  if (root.contains("thresholds")) doc.options.thresholds = P.thresholds(root["thresholds"], "thresholds");
  if (root.contains("threads")) {
    const std::int64_t t = P.integer(root["threads"], "threads", 1);
    if (t < 1 || t > 256) P.fail("threads", "must be in 1..256");
    doc.options.threads = static_cast<unsigned>(std::clamp<std::int64_t>(t, 1, 256));
  }
  const json params = root.contains("params") ? root["params"] : json::object();
  if (known) doc.params = P.params(doc.experiment, params);

  // Named definitions are validated even when unused.
  for (const char* table : {"systems", "observables", "sequences"}) {
    if (!root.contains(table) || !root[table].is_object()) continue;
    for (const auto& [name, v] : root[table].items()) {
      const json ref = name;
      if (std::string(table) == "systems") P.system(ref, table);
      if (std::string(table) == "observables") P.observable(ref, table);
      if (std::string(table) == "sequences") P.sequence(ref, table);
    }
  }
  if (!P.errors.empty()) {
    std::sort(P.errors.begin(), P.errors.end());
    P.errors.erase(std::unique(P.errors.begin(), P.errors.end()), P.errors.end());
    throw ConfigError(P.errors);
  }
  doc.symbols = std::move(P.symbols);
  return doc;
}

json serialize(const ConfigDocument& doc) {
  json j;
  j["experiment"] = doc.experiment;
  json irr = json::object();
  for (const auto& [name, x] : doc.symbols) irr[name] = turns_to_hex(x.value());
  j["irrationals"] = irr;
  j["schedule"] = doc.options.schedule.cutoffs();
  j["thresholds"] = thresholds_json(doc.options.thresholds);
  j["threads"] = doc.options.threads;
  j["params"] = std::visit(ParamsJson{}, doc.params);
  return j;
}

ExperimentReport run_experiment(const ConfigDocument& doc) {
  struct Run {
    const RunOptions& o;
    ExperimentReport operator()(const VdcSuiteParams& p) const { return run_vdc_suite(p, o); }
    ExperimentReport operator()(const WeightedVdcParams& p) const { return run_weighted_vdc(p, o); }
    ExperimentReport operator()(const OrthogonalityParams& p) const { return run_orthogonality(p, o); }
    ExperimentReport operator()(const NfParams& p) const { return run_nf(p, o); }
    ExperimentReport operator()(const RecurrenceParams& p) const { return run_recurrence(p, o); }
    ExperimentReport operator()(const RkParams& p) const { return run_rk(p, o); }
    ExperimentReport operator()(const CounterexampleParams& p) const { return run_counterexample(p, o); }
    ExperimentReport operator()(const SingleTParams& p) const { return run_single_T(p, o); }
    ExperimentReport operator()(const T1T2Params& p) const { return run_T1T2(p, o); }
  };
  ExperimentReport r = std::visit(Run{doc.options}, doc.params);
  r.config = serialize(doc);
  return r;
}

}  // namespace vdclab
