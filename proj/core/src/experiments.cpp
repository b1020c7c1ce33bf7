#include "vdclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "vdclab/error.hpp"
#include "vdclab/numeric.hpp"
#include "vdclab/zoo.hpp"

namespace vdclab {

using boost::multiprecision::cpp_rational;

OrbitSpec OrbitSpec::from_zoo(const ZooEntry& entry) { return {entry.T, entry.f, entry.k}; }

namespace {

void add_symbols(const Phase& x, std::vector<Irrational>& out) {
  for (const auto& [sym, c] : x.terms()) {
    if (std::find(out.begin(), out.end(), sym) == out.end()) out.push_back(sym);
  }
}

std::vector<Irrational> symbols_of(const AffineSystem& T) {
  std::vector<Irrational> out;
  for (const auto& b : T.translation()) add_symbols(b, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t classify_lag(const RunOptions& o) {
  return std::min(o.thresholds.H, default_lag_budget(o.schedule));
}

/// Classifies an orbit, records the evidence as rows under `prefix`, and
/// returns the tag.
SpectralTag classify_into(ExperimentReport& r, const std::string& prefix, const Orbit& orbit,
                          const std::vector<Irrational>& lattice, const RunOptions& o) {
  const Thresholds& t = o.thresholds;
  const CorrelationProfile profile = cesaro_correlation(orbit, classify_lag(o), o.schedule);
  const SpectralEstimate est = classify(profile, t, atom_lattice(lattice, t.lattice_K, t.rational_den));
  const std::int64_t N = o.schedule.top();
  r.add(N, est.H, prefix + ".gamma0", est.gamma0);
  r.add(N, est.H, prefix + ".stability", est.stability);
  r.add(N, est.H, prefix + ".atomic_mass", est.atomic_mass);
  r.add(N, est.H, prefix + ".wiener", est.wiener);
  r.add(N, est.H, prefix + ".l2_top_increment", est.l2.top_increment);
  r.notes.push_back(prefix + " classified " + to_string(est.tag) + " (" + est.reason + ")");
  return est.tag;
}

void record_thresholds(ExperimentReport& r, const Thresholds& t) {
  r.tolerances["classify.w_tol"] = t.w_tol;
  r.tolerances["classify.l2_eps_rel"] = t.l2_eps_rel;
  r.tolerances["classify.s_tol"] = t.s_tol;
  r.tolerances["classify.stability_limit"] = t.stability_limit();
}

/// Rows name(N_q) = name(N_{q-1}) - name(N_q) for the top `count` drops.
void add_drops(ExperimentReport& r, const std::string& metric, const std::vector<double>& values,
               const Schedule& s, std::size_t count) {
  const std::size_t Q = s.size();
  for (std::size_t q = Q - std::min(count, Q - 1); q < Q; ++q) {
    r.add(s[q], 0, metric + "_drop", values[q - 1] - values[q]);
  }
}

// Rank over Q of integer/rational row vectors.
std::size_t rational_rank(std::vector<std::vector<cpp_rational>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][c] == 0) continue;
      const cpp_rational f = rows[i][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Fraction-free (Bareiss) determinant.
BigInt big_det(std::vector<std::vector<BigInt>> a) {
  const std::size_t d = a.size();
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (a[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < d && a[piv][k] == 0) ++piv;
      if (piv == d) return 0;
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      for (std::size_t j = k + 1; j < d; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return sign * a[d - 1][d - 1];
}

// p(n + h) - q(n) in monomial coefficients, constant term dropped.
std::vector<cpp_rational> shifted_difference(const std::vector<cpp_rational>& p, std::int64_t h,
                                             const std::vector<cpp_rational>& q, std::size_t degree) {
  std::vector<cpp_rational> out(degree + 1, 0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    // (n + h)^j = sum_i C(j, i) h^(j-i) n^i
    BigInt binom = 1;
    for (std::size_t i = 0; i <= j; ++i) {
      BigInt hp = 1;
      for (std::size_t e = 0; e < j - i; ++e) hp *= h;
      out[i] += p[j] * cpp_rational(binom * hp);
      binom = binom * (j - i) / (i + 1);
    }
  }
  for (std::size_t j = 0; j < q.size(); ++j) out[j] -= q[j];
  out.erase(out.begin());
  return out;
}

std::vector<cpp_rational> monomials(const IntegerSequenceSpec& p) {
  std::vector<cpp_rational> out;
  for (const auto& c : p.monomial_coeffs()) out.emplace_back(c.num, c.den);
  return out;
}

bool is_floor_power_family(const std::vector<IntegerSequenceSpec>& polys, std::string& why) {
  std::vector<std::pair<std::int64_t, Turns>> seen;
  for (const auto& p : polys) {
    if (p.exponent_fraction() == 0) {
      why = "floor power exponent " + std::to_string(p.exponent()) + " is an integer";
      return false;
    }
    const auto key = std::make_pair(p.exponent_integer_part(), p.exponent_fraction());
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      why = "repeated floor power exponent";
      return false;
    }
    seen.push_back(key);
  }
  return true;
}

/// Checks that every spec is of one family and meets that family's
/// hypothesis; returns the reason for refusal or empty.
std::optional<std::string> sequence_family_violation(const std::vector<IntegerSequenceSpec>& polys, std::int64_t H) {
  if (polys.empty()) return "no sequences given";
  const auto kind = polys.front().kind();
  for (const auto& p : polys) {
    if (p.kind() != kind) return "sequences mix polynomial and floor-power families";
  }
  if (kind == IntegerSequenceSpec::Kind::polynomial) return independence_violation(polys, H);
  if (kind == IntegerSequenceSpec::Kind::floor_power) {
    std::string why;
    if (!is_floor_power_family(polys, why)) return why;
    return std::nullopt;
  }
  return "only polynomial and floor-power sequences are supported";
}

double norm_of(const std::vector<ComplexKahanSum>& sums, double N) {
  KahanSum s;
  for (const auto& c : sums) s += std::norm(c.value());
  return std::sqrt(s.value()) / N;
}

}  // namespace

std::optional<std::string> independence_violation(const std::vector<IntegerSequenceSpec>& polys, std::int64_t H) {
  if (polys.empty()) return "no polynomials given";
  std::size_t degree = 0;
  for (const auto& p : polys) {
    if (p.kind() != IntegerSequenceSpec::Kind::polynomial) return "independence check needs polynomial sequences";
    degree = std::max<std::size_t>(degree, static_cast<std::size_t>(std::max<std::int64_t>(p.degree(), 0)));
  }
  std::vector<std::vector<cpp_rational>> m;
  for (const auto& p : polys) m.push_back(monomials(p));
  for (std::int64_t h = 1; h <= H; ++h) {
    std::vector<std::vector<cpp_rational>> rows;
    std::vector<std::string> names;
    rows.push_back(shifted_difference(m[0], h, m[0], degree));
    names.push_back("p1(n+h)-p1(n)");
    for (std::size_t i = 1; i < m.size(); ++i) {
      rows.push_back(shifted_difference(m[i], h, m[0], degree));
      names.push_back("p" + std::to_string(i + 1) + "(n+h)-p1(n)");
    }
    for (std::size_t i = 1; i < m.size(); ++i) {
      rows.push_back(shifted_difference(m[i], 0, m[0], degree));
      names.push_back("p" + std::to_string(i + 1) + "(n)-p1(n)");
    }
    if (rational_rank(rows) < rows.size()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      return "h=" + std::to_string(h) + ": {" + list + "} is dependent modulo constants";
    }
  }
  return std::nullopt;
}

bool is_totally_ergodic_rotation(const AffineSystem& S) {
  if (!S.is_rotation()) return false;
  const std::vector<Irrational> syms = symbols_of(S);
  std::vector<std::vector<cpp_rational>> rows;
  for (const auto& b : S.translation()) {
    std::vector<cpp_rational> row(syms.size(), 0);
    for (const auto& [sym, c] : b.terms()) {
      const auto k = static_cast<std::size_t>(std::find(syms.begin(), syms.end(), sym) - syms.begin());
      row[k] = cpp_rational(BigInt(i128_to_string(c)));
    }
    rows.push_back(std::move(row));
  }
  return rational_rank(rows) == S.dim();
}

bool is_weakly_mixing_automorphism(const AffineSystem& S) {
  // A root-of-unity eigenvalue of order k has phi(k) <= d, and phi(k) >= sqrt(k/2).
  const std::size_t d = S.dim();
  const std::uint64_t kmax = 2 * d * d;
  const BigMatrix A(S.matrix());
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    std::uint64_t phi = k;
    for (std::uint64_t p = 2, m = k; m > 1; ++p) {
      if (m % p == 0) {
        phi -= phi / p;
        while (m % p == 0) m /= p;
      }
    }
    if (phi > d) continue;
    const auto P = A.power(k, 1u << 20);
    if (!P) continue;
    std::vector<std::vector<BigInt>> rows(d, std::vector<BigInt>(d));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) rows[i][j] = (*P)(i, j) - (i == j ? 1 : 0);
    }
    if (big_det(rows) == 0) return false;
  }
  return true;
}

CharVector with_primes(const CharVector& f, const PrimeSet& primes) {
  std::vector<CharVector::Term> terms;
  for (const auto& [m, c] : f.terms()) {
    switch (m.rep()) {
      case CharIndex::Rep::small: terms.emplace_back(CharIndex(m.small(), primes), c); break;
      case CharIndex::Rep::big: terms.emplace_back(CharIndex::from_big(m.big(), primes), c); break;
      case CharIndex::Rep::residue: throw DomainError("cannot re-fingerprint a residue-only index");
    }
  }
  return CharVector::from_terms(std::move(terms));
}

// ---------------------------------------------------------------- vdC suite

ExperimentReport run_vdc_suite(const VdcSuiteParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "vdc_suite";
  r.headline = "norm";
  r.tolerances["hypothesis_tol"] = p.hypothesis_tol;
  r.tolerances["conclusion_tol"] = p.conclusion_tol;
  const Schedule& s = o.schedule;
  const std::int64_t H = std::min(p.H, default_lag_budget(s));
  const OrbitPtr orbit = p.orbit.orbit();

  const CorrelationProfile profile = cesaro_correlation(*orbit, H, s);
  for (std::size_t q = 0; q < s.size(); ++q) {
    KahanSum avg;
    for (std::int64_t h = 1; h <= H; ++h) {
      const double g = std::abs(profile.gammas[q][static_cast<std::size_t>(h)]);
      r.add(s[q], h, "gamma_abs", g);
      avg += g;
    }
    r.add(s[q], 0, "h_average", H > 0 ? avg.value() / static_cast<double>(H) : 0.0);
  }
  const std::size_t top3 = std::min<std::size_t>(3, s.size());
  double hyp = 0.0;
  for (std::int64_t h = 1; h <= H; ++h) {
    double m = 0.0;
    for (std::size_t q = s.size() - top3; q < s.size(); ++q) {
      m = std::max(m, std::abs(profile.gammas[q][static_cast<std::size_t>(h)]));
    }
    r.add(s.top(), h, "limsup_proxy", m);
    hyp = std::max(hyp, std::abs(profile.top()[static_cast<std::size_t>(h)]));
  }
  r.add(s.top(), 0, "hypothesis_max", hyp);
  r.add(s.top(), 0, "stability", profile.stability);

  const std::vector<double> norms = averaged_norm(*orbit, *constant_weights(), s);
  for (std::size_t q = 0; q < s.size(); ++q) r.add(s[q], 0, "norm", norms[q]);

  if (profile.stability > o.thresholds.stability_limit()) {
    r.abstain("unstable profile: stability " + format_double(profile.stability));
    return r;
  }
  if (hyp >= p.hypothesis_tol) {
    r.abstain("hypothesis fails: max |gamma(h)| = " + format_double(hyp) + " at top N");
    return r;
  }
  r.check("all |gamma(h)| below hypothesis tolerance at top N", "hypothesis_max", s.top(), 0, Cmp::lt,
          p.hypothesis_tol);
  r.check("averaged norm below conclusion tolerance at top N", "norm", s.top(), 0, Cmp::lt, p.conclusion_tol);
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- weighted vdC

ExperimentReport run_weighted_vdc(const WeightedVdcParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "weighted_vdc";
  r.headline = "norm";
  r.tolerances["tol"] = p.tol;
  record_thresholds(r, o.thresholds);
  const Schedule& s = o.schedule;
  const OrbitPtr orbit = p.orbit.orbit();
  const WeightsPtr w = p.weight.weights();

  std::vector<Irrational> wl;
  add_symbols(p.weight.x, wl);
  const SpectralTag wt = classify_into(r, "weights", *weights_as_orbit(w), wl, o);
  const SpectralTag ft = classify_into(r, "orbit", *orbit, symbols_of(p.orbit.T), o);

  const std::vector<double> norms = averaged_norm(*orbit, *w, s);
  for (std::size_t q = 0; q < s.size(); ++q) r.add(s[q], 0, "norm", norms[q]);
  add_drops(r, "norm", norms, s, 2);

  if (wt != SpectralTag::singular) {
    r.abstain("weights classified " + to_string(wt) + ", not singular");
    return r;
  }
  if (ft != SpectralTag::lebesgue) {
    r.abstain("orbit classified " + to_string(ft) + ", not lebesgue");
    return r;
  }
  r.check("weighted average norm below tol at top N", "norm", s.top(), 0, Cmp::lt, p.tol);
  for (std::size_t q = s.size() - std::min<std::size_t>(2, s.size() - 1); q < s.size(); ++q) {
    r.check("norm decreases into N=" + std::to_string(s[q]), "norm_drop", s[q], 0, Cmp::gt, 0.0);
  }
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- orthogonality

ExperimentReport run_orthogonality(const OrthogonalityParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "orthogonality";
  r.headline = "inner_abs";
  r.tolerances["tol"] = p.tol;
  record_thresholds(r, o.thresholds);
  const Schedule& s = o.schedule;
  const OrbitPtr f = p.f.orbit();
  const OrbitPtr g = p.g.orbit();

  const SpectralTag ft = classify_into(r, "f", *f, symbols_of(p.f.T), o);
  const SpectralTag gt = classify_into(r, "g", *g, symbols_of(p.g.T), o);
  const CorrelationProfile cross = cross_correlation(*f, *g, 0, s);
  for (std::size_t q = 0; q < s.size(); ++q) r.add(s[q], 0, "inner_abs", std::abs(cross.gammas[q][0]));

  if (ft != SpectralTag::lebesgue) {
    r.abstain("f classified " + to_string(ft) + ", not lebesgue");
    return r;
  }
  if (gt != SpectralTag::singular) {
    r.abstain("g classified " + to_string(gt) + ", not singular");
    return r;
  }
  r.check("|(1/N) sum <f_n, g_n>| below tol at top N", "inner_abs", s.top(), 0, Cmp::lt, p.tol);
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- nf

namespace {

/// Uniform distribution of (k_{n+h} - k_n) x for each translation coordinate
/// x of S. Returns false if some irrational coordinate fails at top N.
bool ud_check(ExperimentReport& r, const AffineSystem& S, const IntegerSequenceSpec& k, std::int64_t lags,
              double tol, const Schedule& s) {
  bool ok = true;
  bool any = false;
  const auto& b = S.translation();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].is_zero()) continue;
    any = true;
    const std::string tag = ".x" + std::to_string(i + 1);
    for (std::int64_t h = 1; h <= lags; ++h) {
      const IntegerSequenceSpec dk = diff_profile(k, h);
      if (b[i].has_irrational_part()) {
        for (std::size_t q = 0; q < s.size(); ++q) {
          r.add(s[q], h, "ud_discrepancy" + tag, star_discrepancy(dk, b[i].turns(), s[q]));
        }
        if (r.value("ud_discrepancy" + tag, s.top(), h) >= tol) ok = false;
        continue;
      }
      // Rational coordinate: raw residue frequencies on the orbit closure.
      const std::int64_t den = b[i].rational_den();
      const std::int64_t num = b[i].rational_num();
      std::vector<std::int64_t> counts(static_cast<std::size_t>(den), 0);
      std::int64_t g = den;
      for (std::int64_t n = 1; n <= s.top(); ++n) {
        const i128 v = seq_eval(dk, n) % den * num % den;
        const auto res = static_cast<std::int64_t>((v + den) % den);
        ++counts[static_cast<std::size_t>(res)];
        g = std::gcd(g, res);
      }
      double dev = 0.0;
      const double expect = static_cast<double>(g) / static_cast<double>(den);
      for (std::int64_t res = 0; res < den; res += g) {
        dev = std::max(dev, std::abs(static_cast<double>(counts[static_cast<std::size_t>(res)]) /
                                         static_cast<double>(s.top()) - expect));
      }
      r.add(s.top(), h, "ud_rational_freq_dev" + tag, dev);
    }
  }
  if (!any) r.notes.push_back("S has zero translation; no distribution check applies");
  return ok;
}

}  // namespace

ExperimentReport run_nf(const NfParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "nf";
  r.headline = "D";
  r.tolerances["tol"] = p.tol;
  r.tolerances["ud_tol"] = p.ud_tol;
  record_thresholds(r, o.thresholds);
  const Schedule& s = o.schedule;

  const SpectralTag ft = classify_into(r, "T_orbit", *system_orbit(p.T, p.f), symbols_of(p.T), o);
  const bool ud = ud_check(r, p.S, p.k, p.ud_lags, p.ud_tol, s);

  const CharVector target = char_mul(invariant_projection(p.T, p.f), invariant_projection(p.S, p.g));
  const auto avg = product_average({{p.T, IntegerSequenceSpec::identity(), p.f}, {p.S, p.k, p.g}}, s);
  std::vector<double> D;
  for (std::size_t q = 0; q < s.size(); ++q) {
    D.push_back((avg[q] - target).norm());
    r.add(s[q], 0, "D", D.back());
  }
  r.add(s.top(), 0, "D_first_minus_top", D.front() - D.back());
  r.notes.push_back("limit E[f|I_T] E[g|I_S] = " + target.to_string());

  if (ft != SpectralTag::singular) {
    r.abstain("T-orbit of f classified " + to_string(ft) + ", not singular");
    return r;
  }
  if (!ud) {
    r.abstain("difference sequences fail the distribution check");
    return r;
  }
  r.check("D_N decreases from first to top N", "D_first_minus_top", s.top(), 0, Cmp::gt, 0.0);
  r.check("D_N below tol at top N", "D", s.top(), 0, Cmp::lt, p.tol);
  r.conclude();
  return r;
}

ExperimentReport run_recurrence(const RecurrenceParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "recurrence";
  r.headline = "recurrence_average";
  r.tolerances["tol"] = p.tol;
  if (p.expected_limit) r.tolerances["limit_tol"] = p.limit_tol;
  const Schedule& s = o.schedule;
  const std::size_t d = p.T.dim();
  const AffineSystem I = AffineSystem::identity(d);
  const bool exact = p.T.is_rotation() && p.S.is_rotation() && p.A.size() <= 1;

  auto sets_at = [&](std::int64_t n) {
    const i128 kn = seq_eval(p.k, n);
    if (kn > INT64_MAX || kn < INT64_MIN) throw OverflowError("k_n exceeds 64 bits at n=" + std::to_string(n));
    return std::vector<BoxConstraint>{{I, 0, p.A}, {p.T, n, p.A}, {p.S, static_cast<std::int64_t>(kn), p.A}};
  };

  double muA = 0.0;
  double muA_err = 0.0;
  if (p.A.empty()) {
    muA = 0.0;
  } else if (p.A.size() == 1) {
    muA = interval_measure_exact({{I, 0, p.A}});
  } else {
    const GridMeasure g = box_measure({{I, 0, p.A}}, p.M, std::numeric_limits<double>::infinity(), o.threads);
    muA = g.value;
    muA_err = g.error_bound;
  }
  const double mu3 = std::pow(std::min(1.0, muA + muA_err), 3);
  r.add(s.top(), 0, "mu_A_cubed", mu3, muA_err > 0 ? 3 * muA_err : 0.0);
  r.notes.push_back(exact ? "exact interval path" : "grid path at M=" + std::to_string(p.M));

  KahanSum sum;
  KahanSum err;
  std::size_t q = 0;
  try {
    for (std::int64_t n = 1; n <= s.top(); ++n) {
      if (p.A.empty()) {
        sum += 0.0;
      } else if (exact) {
        sum += interval_measure_exact(sets_at(n));
      } else {
        const GridMeasure g = box_measure(sets_at(n), p.M, p.tol, o.threads);
        sum += g.value;
        err += g.error_bound;
      }
      if (n == s[q]) {
        const double N = static_cast<double>(n);
        r.add(n, 0, "recurrence_average", sum.value() / N, err.value() / N);
        ++q;
      }
    }
  } catch (const ResolutionError& e) {
    r.required_resolution = e.required_resolution();
    r.abstain(std::string("grid too coarse: ") + e.what());
    return r;
  }
  const double avg = sum.value() / static_cast<double>(s.top());
  const double avg_err = err.value() / static_cast<double>(s.top());
  r.add(s.top(), 0, "avg_minus_mu3", avg - avg_err - mu3);
  r.check("average >= mu(A)^3 - tol at top N", "avg_minus_mu3", s.top(), 0, Cmp::ge, -p.tol);
  if (p.expected_limit) {
    r.add(s.top(), 0, "limit_deviation", std::abs(avg - *p.expected_limit) + avg_err);
    r.check("average within limit_tol of the expected limit", "limit_deviation", s.top(), 0, Cmp::lt, p.limit_tol);
  }
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- R_k

ExperimentReport run_rk(const RkParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "rk";
  r.headline = "nonrec_max_survivors";
  r.tolerances["positivity_factor"] = p.positivity_factor;
  const std::int64_t N = p.N;
  const RkResult R = rk_enumerate(p.rk, N);
  r.add(N, 0, "rk_count", static_cast<double>(R.members.size()));
  r.add(N, 0, "rk_boundary", static_cast<double>(R.boundary.size()));
  if (!R.boundary.empty()) r.notes.push_back("R_k membership is uncertain at " + std::to_string(R.boundary.size()) + " n");
  if (R.members.empty()) {
    r.abstain("R_k is empty on [1, N]");
    return r;
  }

  // Positivity.
  const std::size_t d = p.T.dim();
  const AffineSystem I = AffineSystem::identity(d);
  auto sets_at = [&](std::int64_t n) {
    std::vector<BoxConstraint> sets{{I, 0, p.A}, {p.T, n, p.A}};
    for (const auto& S : p.S) sets.push_back({S, n, p.A});
    return sets;
  };
  bool rotations = p.T.is_rotation() && p.A.size() == 1;
  for (const auto& S : p.S) rotations = rotations && S.is_rotation();
  std::int64_t best = R.members.front();
  GridMeasure best_grid;
  if (rotations) {
    // Exact measures locate the best n; the grid then confirms it.
    double best_exact = -1.0;
    for (std::int64_t n : R.members) {
      const double v = interval_measure_exact(sets_at(n));
      r.add(N, n, "exact_measure", v);
      if (v > best_exact) {
        best_exact = v;
        best = n;
      }
    }
    best_grid = box_measure(sets_at(best), p.M, std::numeric_limits<double>::infinity(), o.threads);
    r.add(N, best, "grid_measure", best_grid.value, best_grid.error_bound);
    r.add(N, best, "grid_minus_exact", std::abs(best_grid.value - best_exact), best_grid.error_bound);
    r.notes.push_back("positivity: exact scan over R_k, grid at the best n");
  } else {
    double best_margin = -std::numeric_limits<double>::infinity();
    for (std::int64_t n : R.members) {
      const GridMeasure g = box_measure(sets_at(n), p.M, std::numeric_limits<double>::infinity(), o.threads);
      r.add(N, n, "grid_measure", g.value, g.error_bound);
      if (g.value - p.positivity_factor * g.error_bound > best_margin) {
        best_margin = g.value - p.positivity_factor * g.error_bound;
        best = n;
        best_grid = g;
      }
    }
  }
  r.add(N, 0, "positivity_best_n", static_cast<double>(best));
  r.add(N, 0, "positivity_margin", best_grid.value - p.positivity_factor * best_grid.error_bound);

  // Non-recurrence for the skew product.
  const bool nonrec = p.non_recurrence && p.rk.k == 2;
  if (p.non_recurrence && p.rk.k != 2) r.notes.push_back("non-recurrence side applies to k = 2 only; skipped");
  if (nonrec) {
    const AffineSystem skew = AffineSystem::skew_product(Phase::of(p.rk.alpha));
    const Rational w = p.strip_half_width;
    const BoxUnion strip{Box{{Arc::whole(), Arc::from_rationals(Rational{} - w, w)}}};
    std::uint64_t max_surv = 0;
    double max_excess = -std::numeric_limits<double>::infinity();
    for (std::int64_t n : R.members) {
      const GridMeasure g = box_measure({{skew, 0, strip}, {skew, n, strip}, {skew, 2 * n, strip}}, p.M,
                                        std::numeric_limits<double>::infinity(), o.threads);
      r.add(N, n, "nonrec_survivors", static_cast<double>(g.survivors), g.error_bound);
      max_surv = std::max(max_surv, g.survivors);
      max_excess = std::max(max_excess, g.value - g.error_bound);
    }
    r.add(N, 0, "nonrec_max_survivors", static_cast<double>(max_surv));
    r.add(N, 0, "nonrec_max_excess", max_excess);
  }

  r.check("some n in R_k has grid measure above factor * grid error", "positivity_margin", N, 0, Cmp::gt, 0.0);
  if (rotations) {
    r.check("grid agrees with exact measure at the best n", "grid_minus_exact", N, best, Cmp::le,
            best_grid.error_bound);
  }
  if (nonrec) {
    r.check("no grid survivor for any n in R_2", "nonrec_max_survivors", N, 0, Cmp::eq, 0.0);
    r.check("triple intersection within grid error for every n in R_2", "nonrec_max_excess", N, 0, Cmp::le, 0.0);
  }
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- counterexample

ExperimentReport run_counterexample(const CounterexampleParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "counterexample";
  r.headline = "average_norm";
  r.tolerances["deviation_tol"] = 1e-9;
  const Schedule& s = o.schedule;
  const IntMatrix A = IntMatrix::from_rows({{1, 0}, {1, 1}});
  const AffineSystem T(A, {Phase{}, Phase{}});
  const AffineSystem S(A, {Phase::of(p.alpha, 2), Phase{}});
  const auto tri = IntegerSequenceSpec::polynomial_binomial({0, 0, 1});
  auto e = [](std::int64_t a, std::int64_t b) { return CharVector::character(CharIndex{a, b}); };
  r.notes.push_back("T(x,y) = (x, y+x) carries no translation; alpha enters through S only");

  const auto avg = product_average({{T, IntegerSequenceSpec::identity(), e(1, -1)},
                                    {S, IntegerSequenceSpec::identity(), e(0, 1)},
                                    {S, tri, e(-1, 0)}},
                                   s);
  const CharVector one = CharVector::constant(2);
  for (std::size_t q = 0; q < s.size(); ++q) {
    r.add(s[q], 0, "average_norm", avg[q].norm());
    r.add(s[q], 0, "deviation", (avg[q] - one).norm());
  }
  if (p.exploratory) {
    const auto alt = product_average({{T, IntegerSequenceSpec::identity(), e(1, -1)},
                                      {S, IntegerSequenceSpec::identity(), e(0, 1)},
                                      {S, tri, e(2, 0)}},
                                     s);
    for (std::size_t q = 0; q < s.size(); ++q) r.add(s[q], 0, "exploratory_norm", alt[q].norm());
    r.notes.push_back("exploratory_norm replaces g by e(2x); reported without assertion");
  }
  for (std::size_t q = 0; q < s.size(); ++q) {
    r.check("average equals 1 at N=" + std::to_string(s[q]), "deviation", s[q], 0, Cmp::lt, 1e-9);
  }
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- single T

ExperimentReport run_single_T(const SingleTParams& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "single_T";
  r.headline = "D";
  r.tolerances["tol"] = p.tol;
  record_thresholds(r, o.thresholds);
  const Schedule& s = o.schedule;
  if (p.polys.size() != p.g.size()) throw DomainError("single_T needs one g per sequence");

  const auto violation = sequence_family_violation(p.polys, p.independence_lags);
  const bool ergodic = is_totally_ergodic_rotation(p.S);
  const SpectralTag ft = classify_into(r, "T_orbit", *system_orbit(p.T, p.f), symbols_of(p.T), o);

  Complex means = 1.0;
  for (const auto& g : p.g) means *= g.mean();
  const CharVector target = invariant_projection(p.T, p.f).scaled(means);
  std::vector<ProductFactor> factors{{p.T, IntegerSequenceSpec::identity(), p.f}};
  for (std::size_t i = 0; i < p.polys.size(); ++i) factors.push_back({p.S, p.polys[i], p.g[i]});

  if (violation) {
    r.abstain("sequence hypothesis fails: " + *violation);
    return r;
  }
  if (!ergodic) {
    r.abstain("S is not a totally ergodic rotation");
    return r;
  }
  std::vector<CharVector> avg;
  try {
    avg = product_average(factors, s);
  } catch (const DomainError& e) {
    r.abstain(std::string("sequence evaluation refused: ") + e.what());
    return r;
  }
  for (std::size_t q = 0; q < s.size(); ++q) r.add(s[q], 0, "D", (avg[q] - target).norm());
  if (ft != SpectralTag::singular) {
    r.abstain("T-orbit of f classified " + to_string(ft) + ", not singular");
    return r;
  }
  r.check("distance to E[f|I_T] prod int g_i below tol at top N", "D", s.top(), 0, Cmp::lt, p.tol);
  r.conclude();
  return r;
}

// ---------------------------------------------------------------- T1 T2

namespace {

struct T1T2Run {
  std::vector<std::size_t> ids;   // class of each (n, term tuple), first-occurrence numbering
  std::vector<double> norms;      // per cutoff
  std::size_t distinct = 0;
};

/// Per factor: the system images of one character at step n.
struct T1T2Factors {
  const T1T2Params& p;

  std::size_t count() const { return 1 + p.h.size() + p.g.size(); }
  const CharVector& vec(std::size_t j) const {
    if (j == 0) return p.f;
    if (j <= p.h.size()) return p.h[j - 1];
    return p.g[j - 1 - p.h.size()];
  }
  CharVector image(std::size_t j, const CharVector& chi, std::int64_t n) const {
    if (j == 0) return pushforward(p.T, chi, n);
    if (j <= p.h.size()) return pushforward(p.R[j - 1], chi, n);
    const auto& poly = p.polys[j - 1 - p.h.size()];
    const i128 e = seq_eval(poly, n);
    if (e > INT64_MAX || e < INT64_MIN) throw OverflowError("p(n) exceeds 64 bits at n=" + std::to_string(n));
    return pushforward(p.S, pushforward(p.W, chi, n), static_cast<std::int64_t>(e));
  }
  /// Exact image index: matrices only.
  std::vector<BigInt> exact_image(std::size_t j, const CharIndex& m, std::int64_t n) const {
    auto apply = [](const AffineSystem& sys, std::vector<BigInt> v, std::uint64_t k) {
      const auto P = BigMatrix(sys.matrix().transpose()).power(k, std::size_t{1} << 30);
      return P->apply(v);
    };
    std::vector<BigInt> v = m.big();
    if (j == 0) return apply(p.T, v, static_cast<std::uint64_t>(n));
    if (j <= p.h.size()) return apply(p.R[j - 1], v, static_cast<std::uint64_t>(n));
    const auto& poly = p.polys[j - 1 - p.h.size()];
    v = apply(p.W, v, static_cast<std::uint64_t>(n));
    return apply(p.S, v, static_cast<std::uint64_t>(seq_eval(poly, n)));
  }
};

// Iterates over every tuple of term positions in lexicographic order.
template <class F>
void for_each_tuple(const std::vector<std::size_t>& sizes, F&& fn) {
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (auto z : sizes) {
    if (z == 0) return;
  }
  while (true) {
    fn(idx);
    std::size_t k = sizes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (sizes.empty()) return;
  }
}

T1T2Run t1t2_accumulate(const T1T2Params& p, const Schedule& s) {
  const T1T2Factors F{p};
  std::vector<std::size_t> sizes;
  for (std::size_t j = 0; j < F.count(); ++j) sizes.push_back(F.vec(j).size());

  T1T2Run out;
  std::unordered_map<CharIndex, std::size_t, CharIndexHash> id_of;
  std::vector<ComplexKahanSum> sums;
  std::size_t q = 0;
  std::vector<std::vector<CharVector::Term>> images(F.count());
  for (std::int64_t n = 1; n <= s.top(); ++n) {
    for (std::size_t j = 0; j < F.count(); ++j) {
      images[j].clear();
      for (const auto& [m, c] : F.vec(j).terms()) {
        const CharVector im = F.image(j, CharVector::character(m, c), n);
        images[j].push_back(im.terms().front());
      }
    }
    for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
      CharIndex m = images[0][idx[0]].first;
      Complex c = images[0][idx[0]].second;
      for (std::size_t j = 1; j < idx.size(); ++j) {
        m = m + images[j][idx[j]].first;
        c *= images[j][idx[j]].second;
      }
      auto [it, fresh] = id_of.try_emplace(std::move(m), sums.size());
      if (fresh) sums.emplace_back();
      sums[it->second] += c;
      out.ids.push_back(it->second);
    });
    if (n == s[q]) {
      out.norms.push_back(norm_of(sums, static_cast<double>(n)));
      ++q;
    }
  }
  out.distinct = sums.size();
  return out;
}

/// Class ids from exact big-integer indices for n <= N.
std::vector<std::size_t> t1t2_exact_ids(const T1T2Params& p, std::int64_t N) {
  const T1T2Factors F{p};
  std::vector<std::size_t> sizes;
  for (std::size_t j = 0; j < F.count(); ++j) sizes.push_back(F.vec(j).size());
  std::map<std::vector<BigInt>, std::size_t> id_of;
  std::vector<std::size_t> ids;
  std::vector<std::vector<std::vector<BigInt>>> images(F.count());
  for (std::int64_t n = 1; n <= N; ++n) {
    for (std::size_t j = 0; j < F.count(); ++j) {
      images[j].clear();
      for (const auto& [m, c] : F.vec(j).terms()) images[j].push_back(F.exact_image(j, m, n));
    }
    for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
      std::vector<BigInt> m = images[0][idx[0]];
      for (std::size_t j = 1; j < idx.size(); ++j) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += images[j][idx[j]][i];
      }
      auto [it, fresh] = id_of.try_emplace(std::move(m), id_of.size());
      ids.push_back(it->second);
    });
  }
  return ids;
}

}  // namespace

ExperimentReport run_T1T2(const T1T2Params& p, const RunOptions& o) {
  ExperimentReport r;
  r.name = "T1T2";
  r.headline = "norm";
  r.tolerances["tol"] = p.tol;
  record_thresholds(r, o.thresholds);
  const Schedule& s = o.schedule;
  if (p.polys.size() != p.g.size()) throw DomainError("T1T2 needs one g per polynomial");
  if (p.R.size() != p.h.size()) throw DomainError("T1T2 needs one h per R");

  const SpectralTag ft = classify_into(r, "T_orbit", *system_orbit(p.T, p.f), symbols_of(p.T), o);

  std::vector<std::string> refusals;
  if (!p.S.has_zero_translation()) refusals.push_back("S has a translation part");
  if (!is_weakly_mixing_automorphism(p.S)) refusals.push_back("S has a root-of-unity eigenvalue");
  std::vector<const AffineSystem*> group{&p.S, &p.W};
  for (const auto& R : p.R) group.push_back(&R);
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      if (!group[i]->commutes_with(*group[j])) refusals.push_back("R_i, S, W do not commute");
    }
  }
  for (std::size_t i = 0; i < p.polys.size(); ++i) {
    const auto& pi = p.polys[i];
    if (pi.kind() == IntegerSequenceSpec::Kind::polynomial) {
      if (pi.degree() < 2) refusals.push_back("p" + std::to_string(i + 1) + " has degree < 2");
      for (std::size_t j = 0; j < i; ++j) {
        const auto& pj = p.polys[j];
        if (pj.kind() != IntegerSequenceSpec::Kind::polynomial) continue;
        auto a = pi.binomial_coeffs();
        auto b = pj.binomial_coeffs();
        a.resize(std::max(a.size(), b.size()), 0);
        b.resize(a.size(), 0);
        if (std::equal(a.begin() + 1, a.end(), b.begin() + 1)) {
          refusals.push_back("p" + std::to_string(j + 1) + " and p" + std::to_string(i + 1) +
                             " are not essentially distinct");
        }
      }
    } else if (pi.kind() == IntegerSequenceSpec::Kind::floor_power) {
      if (pi.exponent_fraction() == 0 || pi.exponent_integer_part() < 1) {
        refusals.push_back("floor power p" + std::to_string(i + 1) + " needs a non-integer exponent > 1");
      }
    } else {
      refusals.push_back("p" + std::to_string(i + 1) + " is neither polynomial nor floor power");
    }
  }
  const bool mean_zero = std::any_of(p.g.begin(), p.g.end(), [](const CharVector& g) { return g.mean() == 0.0; });
  if (!mean_zero) refusals.push_back("no g_j has integral 0");
  if (s.top() > p.max_N) refusals.push_back("top N exceeds the index budget cap " + std::to_string(p.max_N));
  if (ft != SpectralTag::singular) refusals.push_back("T-orbit of f classified " + to_string(ft));
  if (!refusals.empty()) {
    std::string why;
    for (const auto& x : refusals) why += (why.empty() ? "" : "; ") + x;
    r.abstain("precondition fails: " + why);
    return r;
  }

  const T1T2Run primary = t1t2_accumulate(p, s);
  T1T2Params audit_p = p;
  auto rebase = [](CharVector& v) { v = with_primes(v, PrimeSet::audit()); };
  rebase(audit_p.f);
  for (auto& v : audit_p.h) rebase(v);
  for (auto& v : audit_p.g) rebase(v);
  const T1T2Run audited = t1t2_accumulate(audit_p, s);

  for (std::size_t q = 0; q < s.size(); ++q) {
    r.add(s[q], 0, "norm", primary.norms[q]);
    r.add(s[q], 0, "norm_audit", audited.norms[q]);
  }
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < primary.ids.size(); ++i) disagreements += primary.ids[i] != audited.ids[i];
  r.add(s.top(), 0, "distinct_indices", static_cast<double>(primary.distinct));
  r.add(s.top(), 0, "fingerprint_disagreements", static_cast<double>(disagreements));

  const std::int64_t NE = std::min(p.exhaustive_N, s.top());
  const std::vector<std::size_t> exact = t1t2_exact_ids(p, NE);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) mismatches += exact[i] != primary.ids[i];
  r.add(NE, 0, "exhaustive_mismatches", static_cast<double>(mismatches));

  r.check("norm below tol at top N", "norm", s.top(), 0, Cmp::lt, p.tol);
  r.check("primary and audit fingerprints induce the same index classes", "fingerprint_disagreements", s.top(), 0,
          Cmp::eq, 0.0);
  r.check("exact big-integer classes match fingerprints", "exhaustive_mismatches", NE, 0, Cmp::eq, 0.0);
  r.conclude();
  return r;
}

}  // namespace vdclab
