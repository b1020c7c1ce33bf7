// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: vdclab_acceptance [criterion...]   (default: all of 1..9)

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vdclab/config.hpp"
#include "vdclab/experiments.hpp"
#include "vdclab/zoo.hpp"

using namespace vdclab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [FAILED: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

CharVector e(std::initializer_list<std::int64_t> m) { return CharVector::character(CharIndex(m)); }

AffineSystem rot_alpha() { return AffineSystem::rotation({Phase::of(zoo_alpha()), Phase{}}); }
AffineSystem rot_beta() { return AffineSystem::rotation({Phase{}, Phase::of(zoo_beta())}); }
IntegerSequenceSpec squares() { return IntegerSequenceSpec::polynomial_monomial({{0, 1}, {0, 1}, {1, 1}}); }

Box half_square() { return Box{{Arc::from_rationals({0, 1}, {1, 2}), Arc::from_rationals({0, 1}, {1, 2})}}; }

void report_failures(Outcome& out, const ExperimentReport& r) {
  for (const auto& a : r.assertions) out.require(a.holds, a.description);
  for (const auto& issue : audit(r)) out.require(false, "audit: " + issue);
}

Outcome criterion1() {
  Outcome out;
  const auto t0 = Clock::now();
  const RunOptions o;
  const ExperimentReport r = run_counterexample({}, o);
  const double dt = seconds_since(t0);
  double worst = 0;
  for (const auto N : o.schedule.cutoffs()) worst = std::max(worst, r.value("deviation", N, 0));
  out.detail << "max deviation " << worst << " over " << o.schedule.size() << " cutoffs, " << dt << " s";
  out.require(worst < 1e-9, "deviation < 1e-9");
  out.require(dt < 10, "runtime < 10 s");
  return out;
}

struct ZooRun {
  CorrelationProfile profile;
  SpectralEstimate estimate;
};

ZooRun classify_zoo(const std::string& name, std::int64_t H, const Schedule& s) {
  const ZooEntry& z = zoo_entry(name);
  Thresholds t;
  t.H = H;
  ZooRun run;
  run.profile = cesaro_correlation(*z.orbit(), H, s);
  run.estimate = classify(run.profile, t, atom_lattice(z.lattice, t.lattice_K, t.rational_den));
  return run;
}

const Atom* heaviest(const SpectralEstimate& est) {
  const Atom* best = nullptr;
  for (const auto& a : est.atoms) {
    if (!best || a.mass > best->mass) best = &a;
  }
  return best;
}

// Shared with criterion 9, which checks the same profiles.
std::vector<std::pair<std::string, ZooRun>>& large_zoo_runs() {
  static std::vector<std::pair<std::string, ZooRun>> runs;
  return runs;
}

Outcome criterion2() {
  Outcome out;
  const std::int64_t H = 4096;
  const Schedule s = Schedule::geometric(std::int64_t{1} << 24);
  const auto t0 = Clock::now();
  auto& runs = large_zoo_runs();
  runs.clear();

  runs.emplace_back("rotation", classify_zoo("rotation", H, s));
  {
    const auto& est = runs.back().second.estimate;
    const Atom* a = heaviest(est);
    out.detail << "rotation " << to_string(est.tag);
    out.require(est.tag == SpectralTag::singular, "rotation singular");
    out.require(a && a->location == zoo_alpha().value(), "rotation atom at alpha");
    if (a) out.detail << " atom " << a->label << " mass " << a->mass;
    out.require(a && std::abs(a->mass - 1.0) <= 0.05, "rotation atom mass 1 +- 0.05");
  }

  runs.emplace_back("skew_lebesgue", classify_zoo("skew_lebesgue", H, s));
  {
    const auto& run = runs.back().second;
    double worst = 0;
    for (std::size_t h = 1; h <= 64; ++h) worst = std::max(worst, std::abs(run.profile.top()[h]));
    out.detail << "; skew " << to_string(run.estimate.tag) << " max|gamma(1..64)| " << worst;
    out.require(worst < 1e-12, "skew gamma(h) = 0 for 1 <= h <= 64");
    out.require(run.estimate.tag == SpectralTag::lebesgue, "skew lebesgue");
  }

  runs.emplace_back("mixed", classify_zoo("mixed", H, s));
  {
    const auto& est = runs.back().second.estimate;
    const Atom* a = heaviest(est);
    out.detail << "; mixed " << to_string(est.tag);
    if (a) out.detail << " atom mass " << a->mass;
    out.require(est.tag == SpectralTag::mixed, "mixed classification");
    out.require(a && std::abs(a->mass - 0.5) <= 0.05, "mixed atom mass 0.5 +- 0.05");
  }

  const double dt = seconds_since(t0);
  out.detail << "; " << dt << " s";
  out.require(dt < 60, "runtime < 60 s");
  return out;
}

Outcome criterion3() {
  Outcome out;
  const auto t0 = Clock::now();
  WeightedVdcParams p{OrbitSpec::from_zoo(zoo_entry("skew_lebesgue")),
                      {IntegerSequenceSpec::identity(), Phase::of(zoo_alpha())}};
  const RunOptions o;
  const ExperimentReport r = run_weighted_vdc(p, o);
  const double dt = seconds_since(t0);
  const auto& s = o.schedule;
  const std::size_t Q = s.size();
  const double a = r.value("norm", s[Q - 3], 0), b = r.value("norm", s[Q - 2], 0), c = r.value("norm", s[Q - 1], 0);
  out.detail << "norms " << a << " > " << b << " > " << c << " at N = " << s[Q - 3] << ", " << s[Q - 2] << ", "
             << s.top() << "; " << dt << " s";
  out.require(s.top() == 100000, "top N = 1e5");
  out.require(c < 0.05, "norm < 0.05");
  out.require(a > b && b > c, "monotone over the top three cutoffs");
  out.require(dt < 60, "runtime < 60 s");
  report_failures(out, r);
  return out;
}

Outcome criterion4() {
  Outcome out;
  const RunOptions o;
  OrthogonalityParams p{OrbitSpec::from_zoo(zoo_entry("weyl_quadratic")),
                        OrbitSpec::from_zoo(zoo_entry("rotation_beta"))};
  const ExperimentReport r = run_orthogonality(p, o);
  const double v = r.value("inner_abs", o.schedule.top(), 0);
  out.detail << "|(1/N) sum <f_n, g_n>| = " << v << " at N = " << o.schedule.top();
  out.require(v < 0.02, "inner product < 0.02");
  report_failures(out, r);
  return out;
}

Outcome criterion5() {
  Outcome out;
  const RunOptions o;
  const auto t0 = Clock::now();
  const ExperimentReport nf = run_nf({rot_alpha(), rot_beta(), squares(), e({1, 0}), e({0, 1})}, o);
  RecurrenceParams rp{rot_alpha(), rot_beta(), squares(), {half_square()}};
  rp.expected_limit = 1.0 / 16;
  const ExperimentReport rec = run_recurrence(rp, o);
  const double dt = seconds_since(t0);
  const double D = nf.value("D", o.schedule.top(), 0);
  const double avg = rec.value("recurrence_average", o.schedule.top(), 0);
  out.detail << "D = " << D << ", recurrence average " << avg << " (limit 1/16, floor 1/64); " << dt << " s";
  out.require(D < 0.05, "D_N < 0.05");
  out.require(std::abs(avg - 1.0 / 16) <= 0.01, "average within 0.01 of 1/16");
  out.require(avg >= 1.0 / 64, "average >= mu(A)^3");
  out.require(dt < 120, "runtime < 2 min");
  report_failures(out, nf);
  report_failures(out, rec);
  return out;
}

Outcome criterion6() {
  Outcome out;
  const auto t0 = Clock::now();
  RkParams p;
  p.rk.k = 2;
  p.rk.alpha = zoo_alpha();
  p.N = 500;
  p.M = 2000;
  p.T = rot_alpha();
  p.S = {rot_beta()};
  p.A = {Box{{Arc::from_rationals({0, 1}, {9, 10}), Arc::from_rationals({0, 1}, {9, 10})}}};
  p.non_recurrence = true;
  p.strip_half_width = Rational{1, 16};
  const ExperimentReport r = run_rk(p, RunOptions{});
  const double dt = seconds_since(t0);
  const double survivors = r.value("nonrec_max_survivors", p.N, 0);
  const double margin = r.value("positivity_margin", p.N, 0);
  out.detail << "|R_2 cap [1,500]| = " << r.value("rk_count", p.N, 0) << ", max survivors " << survivors
             << ", positivity margin " << margin << " at n = " << r.value("positivity_best_n", p.N, 0) << "; " << dt
             << " s";
  out.require(survivors == 0, "no grid survivors");
  out.require(margin > 0, "positive measure above 10x grid error");
  out.require(dt < 300, "runtime < 5 min");
  report_failures(out, r);
  return out;
}

Outcome criterion7() {
  Outcome out;
  const AffineSystem cat(IntMatrix::from_rows({{2, 1}, {1, 1}}), {Phase{}, Phase{}});
  RunOptions o;
  o.schedule = Schedule({500, 1000, 2000});
  T1T2Params p{rot_alpha(), {}, cat, system_power(cat, 2), {squares()}, e({1, 0}), {}, {e({1, 0})}};
  p.exhaustive_N = 200;
  const ExperimentReport r = run_T1T2(p, o);
  const double norm = r.value("norm", 2000, 0);
  const double dis = r.value("fingerprint_disagreements", 2000, 0);
  const double mis = r.value("exhaustive_mismatches", 200, 0);
  out.detail << "norm " << norm << " at N = 2000, disagreements " << dis << ", exhaustive mismatches " << mis;
  out.require(norm < 0.05, "norm < 0.05");
  out.require(dis == 0, "zero fingerprint disagreements");
  out.require(mis == 0, "exhaustive cross-check matches");
  report_failures(out, r);
  return out;
}

Outcome criterion8() {
  Outcome out;
  const Schedule s({65536, 131072, 262144});
  double worst = 0;
  int pairs = 0;
  for (const auto& a : zoo()) {
    for (const auto& b : zoo()) {
      if (a.T.dim() != b.T.dim()) continue;
      const auto res = cross_spectrum_polarization(a.orbit(), b.orbit(), 64, s);
      worst = std::max(worst, res.max_discrepancy);
      ++pairs;
      if (res.max_discrepancy >= 1e-9) out.require(false, a.name + " x " + b.name);
    }
  }
  out.detail << pairs << " same-torus ordered pairs, max |direct - polarized| = " << worst;
  return out;
}

Outcome criterion9() {
  Outcome out;
  std::vector<std::pair<std::string, ZooRun>> runs;
  const Schedule s({65536, 131072, 262144});
  for (const auto& z : zoo()) runs.emplace_back(z.name, classify_zoo(z.name, 512, s));
  for (const auto& r : large_zoo_runs()) runs.push_back(r);

  double dmin = 0, int_err = 0, eig_slack = 0;
  for (const auto& [name, run] : runs) {
    const auto& est = run.estimate;
    dmin = std::min(dmin, est.density_min);
    const double ie = std::abs(est.density_integral - est.gamma0);
    int_err = std::max(int_err, ie);
    out.require(est.density_min >= -1e-8, name + " density >= -1e-8");
    out.require(ie <= 1e-10, name + " density integral");
    // Finite Cesaro profiles are PSD up to their own instability; 1e-9 covers eigensolver rounding.
    const double floor = -std::max(10 * run.profile.stability, 1e-9);
    const double eig = toeplitz_min_eigenvalue(run.profile.top());
    eig_slack = std::min(eig_slack, eig - floor);
    out.require(eig >= floor, name + " Toeplitz PSD");
  }
  out.detail << runs.size() << " profiles: min density " << dmin << ", max integral error " << int_err
             << ", min Toeplitz slack " << eig_slack;

  // Two independent runs of a parsed config must serialize identically.
  const std::string cfg = R"({"experiment": "nf", "irrationals": {"alpha": "sqrt2-1", "beta": "golden-1"},
    "schedule": [1000, 2000, 4000],
    "systems": {"T": {"translation": ["alpha", "0"]}, "S": {"translation": ["0", "beta"]}},
    "sequences": {"sq": {"polynomial": [0, 0, 1]}},
    "params": {"T": "T", "S": "S", "k": "sq", "f": {"terms": [{"index": [1, 0]}]},
               "g": {"terms": [{"index": [0, 1]}]}}})";
  std::string first, first_csv;
  for (int i = 0; i < 2; ++i) {
    const ExperimentReport r = run_experiment(parse_config(cfg));
    const std::string bytes = r.to_json().dump(2), csv = metrics_csv(r);
    if (i == 0) {
      first = bytes;
      first_csv = csv;
    } else {
      out.require(bytes == first && csv == first_csv, "byte-identical reruns");
    }
  }
  out.detail << "; reruns byte-identical: " << (out.pass ? "yes" : "see failures");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  // Criterion 9 reuses the large profiles of criterion 2.
  if (selected.count(9) && !selected.count(2)) selected.insert(2);

  bool all = true;
  for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) {
    if (!selected.empty() && !selected.count(c)) continue;
    Outcome out;
    try {
      out = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& ex) {
      out.pass = false;
      out.detail << "exception: " << ex.what();
    }
    all = all && out.pass;
    std::cout << "criterion " << c << ": " << (out.pass ? "PASS" : "FAIL") << " - " << out.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
