#include "vdclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "vdclab/error.hpp"
#include "vdclab/numeric.hpp"

namespace vdclab {

namespace {

void add_lattice(const std::vector<Irrational>& xs, std::size_t i, std::int64_t budget, Turns loc, std::string label,
                 std::map<Turns, std::string>& out) {
  if (i == xs.size()) {
    out.try_emplace(loc, label.empty() ? "0" : label);
    return;
  }
  for (std::int64_t k = -budget; k <= budget; ++k) {
    std::string l = label;
    if (k != 0) {
      if (!l.empty() && k > 0) l += "+";
      l += (k == 1 ? "" : k == -1 ? "-" : std::to_string(k) + "*") + xs[i].label();
    }
    add_lattice(xs, i + 1, budget - std::abs(k), loc + mul_turns(k, xs[i].value()), std::move(l), out);
  }
}

std::vector<Complex> check_gamma(const std::vector<Complex>& gamma) {
  if (gamma.empty()) throw DomainError("empty correlation profile");
  return gamma;
}

}  // namespace

std::vector<AtomCandidate> atom_lattice(const std::vector<Irrational>& irrationals, std::int64_t K, std::int64_t D) {
  std::map<Turns, std::string> found;
  add_lattice(irrationals, 0, std::max<std::int64_t>(K, 0), Turns{0}, "", found);
  for (std::int64_t q = 2; q <= D; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) == 1) found.try_emplace(turns_from_ratio(p, q), std::to_string(p) + "/" + std::to_string(q));
    }
  }
  std::vector<AtomCandidate> out;
  for (auto& [loc, label] : found) out.push_back({loc, label});
  return out;
}

std::vector<double> fejer_density(const std::vector<Complex>& gamma, std::int64_t G, double* imag_residue) {
  check_gamma(gamma);
  if (G < 1 || (G & (G - 1)) != 0) throw DomainError("density grid size must be a power of two");
  const auto H = static_cast<std::int64_t>(gamma.size()) - 1;
  std::vector<Complex> a(static_cast<std::size_t>(G));
  // e(-h j / G) is G-periodic in h, so folding h mod G evaluates the sum exactly at the grid points.
  for (std::int64_t h = -H; h <= H; ++h) {
    const double w = 1.0 - static_cast<double>(std::abs(h)) / static_cast<double>(H + 1);
    const Complex g = h >= 0 ? gamma[static_cast<std::size_t>(h)] : std::conj(gamma[static_cast<std::size_t>(-h)]);
    a[static_cast<std::size_t>(((h % G) + G) % G)] += w * g;
  }
  fft_inplace(a, false);
  std::vector<double> out(a.size());
  double imag = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    out[j] = a[j].real();
    imag = std::max(imag, std::abs(a[j].imag()));
  }
  if (imag_residue) *imag_residue = imag;
  return out;
}

std::vector<double> fejer_density(const CorrelationProfile& profile, std::int64_t G, const Thresholds& t) {
  if (profile.stability > t.stability_limit()) {
    throw UnstableProfileError("profile stability " + std::to_string(profile.stability) + " exceeds " +
                               std::to_string(t.stability_limit()));
  }
  return fejer_density(profile.top(), G);
}

std::vector<Atom> atom_scan(const std::vector<Complex>& gamma, const std::vector<AtomCandidate>& candidates) {
  check_gamma(gamma);
  const auto H = static_cast<std::int64_t>(gamma.size()) - 1;
  std::vector<Atom> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    ComplexKahanSum acc;
    for (std::int64_t h = 1; h <= H; ++h) {
      acc += gamma[static_cast<std::size_t>(h)] * unit_phase(Turns{0} - mul_turns(h, c.location));
    }
    const Complex m = H > 0 ? acc.value() / static_cast<double>(H) : gamma[0];
    out.push_back({c.location, c.label, m.real(), m.imag()});
  }
  return out;
}

double wiener_statistic(const std::vector<Complex>& gamma) {
  check_gamma(gamma);
  KahanSum s;
  s += std::norm(gamma[0]);
  for (std::size_t h = 1; h < gamma.size(); ++h) s += 2.0 * std::norm(gamma[h]);
  return s.value() / static_cast<double>(2 * gamma.size() - 1);
}

L2Tail l2_tail(const std::vector<Complex>& gamma) {
  check_gamma(gamma);
  const std::size_t H = gamma.size() - 1;
  L2Tail out;
  out.partial.assign(H + 1, 0.0);
  KahanSum s;
  for (std::size_t h = 1; h <= H; ++h) {
    s += std::norm(gamma[h]);
    out.partial[h] = s.value();
  }
  const std::size_t lo = std::max<std::size_t>(1, H / 2);
  out.top_increment = out.partial[H] - out.partial[lo];
  if (H >= 2) {
    auto fit = [&](auto value) -> std::optional<double> {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      double n = 0;
      for (std::size_t h = lo; h <= H; ++h) {
        const double v = value(h);
        if (!(v > 0.0)) return std::nullopt;
        const double x = std::log(static_cast<double>(h));
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1;
      }
      const double den = n * sxx - sx * sx;
      if (n < 2 || den <= 0) return std::nullopt;
      return (n * sxy - sx * sy) / den;
    };
    out.increment_slope = fit([&](std::size_t h) { return std::norm(gamma[h]); });
    out.partial_slope = fit([&](std::size_t h) { return out.partial[h]; });
  }
  return out;
}

std::string to_string(SpectralTag tag) {
  switch (tag) {
    case SpectralTag::lebesgue: return "lebesgue";
    case SpectralTag::singular: return "singular";
    case SpectralTag::mixed: return "mixed";
    case SpectralTag::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SpectralEstimate classify(const CorrelationProfile& profile, const Thresholds& t,
                          const std::vector<AtomCandidate>& candidates) {
  SpectralEstimate est;
  est.thresholds = t;
  est.H = profile.H;
  est.stability = profile.stability;
  const auto& gamma = profile.top();
  est.gamma0 = gamma[0].real();
  if (profile.stability > t.stability_limit()) {
    est.reason = "profile unstable across the schedule";
    return est;
  }
  if (!(est.gamma0 > 0.0)) {
    est.reason = "zero profile";
    return est;
  }
  est.density = fejer_density(gamma, t.G, &est.density_imag_residue);
  est.density_min = *std::min_element(est.density.begin(), est.density.end());
  KahanSum integral;
  for (double v : est.density) integral += v;
  est.density_integral = integral.value() / static_cast<double>(est.density.size());

  for (auto& a : atom_scan(gamma, candidates)) {
    if (a.mass >= t.atom_min_rel * est.gamma0) est.atoms.push_back(std::move(a));
  }
  for (const auto& a : est.atoms) est.atomic_mass += a.mass;
  est.wiener = wiener_statistic(gamma);
  est.l2 = l2_tail(gamma);

  std::vector<Complex> residual = gamma;
  for (std::size_t h = 0; h < residual.size(); ++h) {
    for (const auto& a : est.atoms) residual[h] -= a.mass * unit_phase(mul_turns(static_cast<i128>(h), a.location));
  }
  est.residual_top_increment = l2_tail(residual).top_increment;

  const double g0 = est.gamma0;
  const double eps = t.l2_eps_rel * g0 * g0;
  const bool tail_summable = est.l2.top_increment < eps;
  if (est.atomic_mass < t.s_tol * g0 && est.wiener < t.w_tol && tail_summable) {
    est.tag = SpectralTag::lebesgue;
    est.reason = "no atoms, square-summable correlations";
  } else if (est.atomic_mass >= (1.0 - t.s_tol) * g0) {
    est.tag = SpectralTag::singular;
    est.reason = "atoms carry the full mass";
  } else if (est.atomic_mass >= t.s_tol * g0 && g0 - est.atomic_mass >= t.s_tol * g0 &&
             est.residual_top_increment < eps) {
    est.tag = SpectralTag::mixed;
    est.reason = "atoms plus a square-summable remainder";
  } else {
    est.reason = "neither atomic nor square-summable within tolerance";
  }
  return est;
}

PolarizationResult cross_spectrum_polarization(const OrbitPtr& f, const OrbitPtr& g, std::int64_t H,
                                               const Schedule& schedule, const Thresholds& t) {
  PolarizationResult out;
  const CorrelationProfile direct = cross_correlation(*f, *g, H, schedule);
  out.direct = direct.top();
  out.polarized.assign(out.direct.size(), Complex{});
  const Complex as[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const Complex a : as) {
    const auto fa = sum_orbit({{1.0, f}, {a, g}});
    const CorrelationProfile p = cesaro_correlation(*fa, H, schedule);
    out.max_stability = std::max(out.max_stability, p.stability);
    if (p.stability > t.stability_limit()) {
      throw UnstableProfileError("polarized profile stability " + std::to_string(p.stability) + " exceeds " +
                                 std::to_string(t.stability_limit()));
    }
    for (std::size_t h = 0; h < out.polarized.size(); ++h) out.polarized[h] += 0.25 * a * p.top()[h];
  }
  for (std::size_t h = 0; h < out.direct.size(); ++h) {
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(out.direct[h] - out.polarized[h]));
  }
  return out;
}

double toeplitz_min_eigenvalue(const std::vector<Complex>& gamma, std::size_t max_size) {
  check_gamma(gamma);
  const auto n = static_cast<Eigen::Index>(std::min(gamma.size(), max_size));
  Eigen::MatrixXcd T(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto h = static_cast<std::size_t>(std::abs(i - j));
      T(i, j) = i >= j ? gamma[h] : std::conj(gamma[h]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(T, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace vdclab
