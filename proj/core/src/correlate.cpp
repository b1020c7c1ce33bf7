#include "vdclab/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "vdclab/error.hpp"
#include "vdclab/numeric.hpp"

namespace vdclab {

using boost::multiprecision::uint256_t;

Schedule::Schedule(std::vector<std::int64_t> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.size() < 3) throw DomainError("schedule needs at least 3 cutoffs");
  if (cutoffs_.front() < 1) throw DomainError("schedule cutoffs must be >= 1");
  for (std::size_t i = 1; i < cutoffs_.size(); ++i) {
    if (cutoffs_[i] <= cutoffs_[i - 1]) throw DomainError("schedule cutoffs must be strictly increasing");
  }
}

Schedule Schedule::geometric(std::int64_t budget, std::int64_t base) {
  if (base < 1) throw DomainError("schedule base must be >= 1");
  std::vector<std::int64_t> c;
  for (std::int64_t v = base; v < budget; v *= 2) c.push_back(v);
  c.push_back(budget);
  return Schedule(std::move(c));
}

std::int64_t default_lag_budget(const Schedule& schedule) {
  std::int64_t h = static_cast<std::int64_t>(std::sqrt(static_cast<double>(schedule.top())));
  while (h * h > schedule.top()) --h;
  while ((h + 1) * (h + 1) <= schedule.top()) ++h;
  return h;
}

namespace {

// Pairs <f_{n+h}, g_n> grouped by character index within a block of n,
// using direct pairing for sparse indices and an FFT cross-correlation for
// dense ones. Blocks never straddle a schedule cutoff.
class CorrelationEngine {
 public:
  CorrelationEngine(const Orbit& f, const Orbit* g, std::int64_t H)
      : f_(f), g_(g), H_(H), fft_size_(next_pow2(std::max<std::size_t>(1024, 8 * static_cast<std::size_t>(H)))),
        block_(static_cast<std::int64_t>(fft_size_) - H), acc_(static_cast<std::size_t>(H) + 1) {}

  CorrelationProfile run(const Schedule& schedule) {
    CorrelationProfile out;
    out.H = H_;
    out.schedule = schedule;
    std::int64_t s = 1;
    for (const std::int64_t cutoff : schedule.cutoffs()) {
      while (s <= cutoff) {
        const std::int64_t len = std::min(block_, cutoff - s + 1);
        process_block(s, len);
        s += len;
      }
      std::vector<Complex> row(acc_.size());
      for (std::size_t h = 0; h < acc_.size(); ++h) row[h] = acc_[h].value() / static_cast<double>(cutoff);
      out.gammas.push_back(std::move(row));
    }
    const auto& a = out.gammas[out.gammas.size() - 1];
    const auto& b = out.gammas[out.gammas.size() - 2];
    for (std::size_t h = 0; h < a.size(); ++h) out.stability = std::max(out.stability, std::abs(a[h] - b[h]));
    return out;
  }

 private:
  struct Slot {
    std::vector<std::pair<std::int64_t, Complex>> ys;  // f side, offsets in [0, len + H)
    std::vector<std::pair<std::int64_t, Complex>> xs;  // g side, offsets in [0, len)
  };

  Slot& slot_for(const CharIndex& m) {
    auto [it, inserted] = slot_of_.try_emplace(m, slots_used_);
    if (inserted) {
      if (slots_used_ == slots_.size()) slots_.emplace_back();
      ++slots_used_;
    }
    return slots_[it->second];
  }

  // Makes fvals_ hold f_s .. f_{s+total-1}, keeping the lookahead already
  // computed for the previous block.
  void load_window(std::int64_t s, std::size_t total) {
    const auto have_end = win_start_ + static_cast<std::int64_t>(fvals_.size());
    if (!fvals_.empty() && win_start_ <= s && s < have_end) {
      const auto drop = static_cast<std::size_t>(s - win_start_);
      fvals_.erase(fvals_.begin(), fvals_.begin() + static_cast<std::ptrdiff_t>(drop));
      if (fvals_.size() > total) fvals_.resize(total);
      if (fvals_.size() < total) {
        f_.fill(s + static_cast<std::int64_t>(fvals_.size()), total - fvals_.size(), tmp_);
        for (auto& v : tmp_) fvals_.push_back(std::move(v));
      }
    } else {
      f_.fill(s, total, fvals_);
    }
    win_start_ = s;
  }

  void process_block(std::int64_t s, std::int64_t len) {
    load_window(s, static_cast<std::size_t>(len + H_));
    const std::vector<CharVector>* gv = &fvals_;
    if (g_ != nullptr) {
      g_->fill(s, static_cast<std::size_t>(len), gvals_);
      gv = &gvals_;
    }
    slot_of_.clear();
    slot_of_.reserve(static_cast<std::size_t>(len + H_));
    for (std::size_t i = 0; i < slots_used_; ++i) {
      slots_[i].xs.clear();
      slots_[i].ys.clear();
    }
    slots_used_ = 0;
    for (std::int64_t j = 0; j < len; ++j) {
      for (const auto& [m, c] : (*gv)[static_cast<std::size_t>(j)].terms()) slot_for(m).xs.emplace_back(j, c);
    }
    for (std::int64_t j = 0; j < len + H_; ++j) {
      for (const auto& [m, c] : fvals_[static_cast<std::size_t>(j)].terms()) {
        auto it = slot_of_.find(m);
        if (it != slot_of_.end()) slots_[it->second].ys.emplace_back(j, c);
      }
    }
    const double fft_cost = 3.0 * static_cast<double>(fft_size_) * std::log2(static_cast<double>(fft_size_));
    for (std::size_t k = 0; k < slots_used_; ++k) {
      const Slot& sl = slots_[k];
      if (sl.xs.empty() || sl.ys.empty()) continue;
      const double direct_cost =
          static_cast<double>(sl.xs.size()) * std::min<double>(static_cast<double>(sl.ys.size()), static_cast<double>(H_ + 1));
      if (direct_cost <= fft_cost) {
        pair_direct(sl);
      } else {
        pair_fft(sl);
      }
    }
  }

  void pair_direct(const Slot& sl) {
    for (const auto& [i, x] : sl.xs) {
      auto lo = std::lower_bound(sl.ys.begin(), sl.ys.end(), i,
                                 [](const auto& e, std::int64_t v) { return e.first < v; });
      for (auto it = lo; it != sl.ys.end() && it->first <= i + H_; ++it) {
        acc_[static_cast<std::size_t>(it->first - i)] += it->second * std::conj(x);
      }
    }
  }

  void pair_fft(const Slot& sl) {
    ya_.assign(fft_size_, Complex{});
    xa_.assign(fft_size_, Complex{});
    for (const auto& [j, c] : sl.ys) ya_[static_cast<std::size_t>(j)] += c;
    for (const auto& [j, c] : sl.xs) xa_[static_cast<std::size_t>(j)] += c;
    fft_inplace(ya_, false);
    fft_inplace(xa_, false);
    for (std::size_t k = 0; k < fft_size_; ++k) ya_[k] *= std::conj(xa_[k]);
    fft_inplace(ya_, true);
    const double scale = 1.0 / static_cast<double>(fft_size_);
    for (std::int64_t h = 0; h <= H_; ++h) acc_[static_cast<std::size_t>(h)] += ya_[static_cast<std::size_t>(h)] * scale;
  }

  const Orbit& f_;
  const Orbit* g_;
  std::int64_t H_;
  std::size_t fft_size_;
  std::int64_t block_;
  std::vector<ComplexKahanSum> acc_;
  std::vector<CharVector> fvals_, gvals_, tmp_;
  std::int64_t win_start_ = 0;
  std::unordered_map<CharIndex, std::size_t, CharIndexHash> slot_of_;
  std::vector<Slot> slots_;
  std::size_t slots_used_ = 0;
  std::vector<Complex> ya_, xa_;
};

void check_lag(std::int64_t& H, const Schedule& schedule) {
  const std::int64_t budget = default_lag_budget(schedule);
  if (H < 0) H = budget;
  if (H > budget) {
    throw DomainError("lag H=" + std::to_string(H) + " exceeds floor(sqrt(N_Q))=" + std::to_string(budget));
  }
}

// Per-index running sums, iterated in first-insertion order.
class IndexAccumulator {
 public:
  void add(const CharIndex& m, Complex c) {
    auto [it, inserted] = slot_of_.try_emplace(m, sums_.size());
    if (inserted) sums_.emplace_back(m, ComplexKahanSum{});
    sums_[it->second].second += c;
  }
  double norm(double N) const {
    KahanSum s;
    for (const auto& e : sums_) s += std::norm(e.second.value());
    return std::sqrt(s.value()) / N;
  }
  CharVector snapshot(double N) const {
    std::vector<CharVector::Term> terms;
    terms.reserve(sums_.size());
    for (const auto& [m, c] : sums_) terms.emplace_back(m, c.value() / N);
    return CharVector::from_terms(std::move(terms));
  }

 private:
  std::unordered_map<CharIndex, std::size_t, CharIndexHash> slot_of_;
  std::vector<std::pair<CharIndex, ComplexKahanSum>> sums_;
};

template <class OnCutoff>
void accumulate_orbit(const Orbit& f, const Weights* c, const Schedule& schedule, OnCutoff on_cutoff) {
  constexpr std::int64_t kChunk = 4096;
  IndexAccumulator acc;
  std::vector<CharVector> vals;
  std::int64_t s = 1;
  for (std::size_t q = 0; q < schedule.size(); ++q) {
    const std::int64_t cutoff = schedule[q];
    while (s <= cutoff) {
      const std::int64_t len = std::min(kChunk, cutoff - s + 1);
      f.fill(s, static_cast<std::size_t>(len), vals);
      for (std::int64_t j = 0; j < len; ++j) {
        const Complex w = c ? c->at(s + j) : Complex{1.0};
        for (const auto& [m, a] : vals[static_cast<std::size_t>(j)].terms()) acc.add(m, w * a);
      }
      s += len;
    }
    on_cutoff(acc, static_cast<double>(cutoff));
  }
}

}  // namespace

CorrelationProfile cesaro_correlation(const Orbit& f, std::int64_t H, const Schedule& schedule) {
  check_lag(H, schedule);
  return CorrelationEngine(f, nullptr, H).run(schedule);
}

CorrelationProfile cross_correlation(const Orbit& f, const Orbit& g, std::int64_t H, const Schedule& schedule) {
  check_lag(H, schedule);
  if (f.dim() != g.dim()) throw DomainError("cross_correlation of orbits on different tori");
  return CorrelationEngine(f, &g, H).run(schedule);
}

std::vector<double> averaged_norm(const Orbit& f, const Weights& c, const Schedule& schedule) {
  std::vector<double> out;
  accumulate_orbit(f, &c, schedule, [&](const IndexAccumulator& acc, double N) { out.push_back(acc.norm(N)); });
  return out;
}

std::vector<CharVector> orbit_average(const Orbit& f, const Schedule& schedule) {
  std::vector<CharVector> out;
  accumulate_orbit(f, nullptr, schedule, [&](const IndexAccumulator& acc, double N) { out.push_back(acc.snapshot(N)); });
  return out;
}

std::vector<CharVector> product_average(const std::vector<ProductFactor>& factors, const Schedule& schedule) {
  std::vector<OrbitPtr> orbits;
  for (const auto& fac : factors) orbits.push_back(system_orbit(fac.T, fac.f, fac.exponent));
  return orbit_average(*product_orbit(std::move(orbits)), schedule);
}

// ---- box measures ---------------------------------------------------------

Arc Arc::from_rationals(const Rational& a, const Rational& b) {
  const Rational w = b - a;
  if (w.num < 0) throw DomainError("arc [" + a.to_string() + ", " + b.to_string() + ") has negative width");
  if (w.num >= w.den) return whole();
  return {turns_from_ratio(a.num, a.den), turns_from_ratio(w.num, w.den), false};
}

double Arc::length() const { return full ? 1.0 : turns_to_double(width); }

namespace {

struct PreparedSet {
  std::size_t d;
  IntMatrix A;
  std::vector<Turns> b;
  const BoxUnion* boxes;
};

bool in_union(const BoxUnion& U, const Turns* y) {
  for (const auto& box : U) {
    bool in = true;
    for (std::size_t k = 0; k < box.sides.size() && in; ++k) in = box.sides[k].contains(y[k]);
    if (in) return true;
  }
  return false;
}

}  // namespace

GridMeasure box_measure(const std::vector<BoxConstraint>& sets, std::int64_t M, double max_error, unsigned threads) {
  if (sets.empty()) throw DomainError("box_measure needs at least one set");
  if (M < 1) throw DomainError("grid resolution must be >= 1");
  const std::size_t d = sets.front().T.dim();
  if (d == 0 || d > 4) throw DomainError("box_measure supports dimensions 1..4");
  std::vector<PreparedSet> prep;
  double facet_weight = 0.0;  // sum over facets of 2 ||row||_1
  for (const auto& s : sets) {
    if (s.T.dim() != d) throw DomainError("box_measure sets live on different tori");
    for (const auto& box : s.A) {
      if (box.sides.size() != d) throw DomainError("box dimension does not match the torus");
    }
    const AffineSystem Tn = system_power(s.T, s.n);
    PreparedSet p{d, Tn.matrix(), {}, &s.A};
    for (const auto& ph : Tn.translation()) p.b.push_back(ph.turns());
    for (const auto& box : s.A) {
      for (std::size_t k = 0; k < d; ++k) {
        if (box.sides[k].full) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < d; ++j) row += std::abs(static_cast<double>(p.A(k, j)));
        facet_weight += 2.0 * 2.0 * row;  // two facets per side
      }
    }
    prep.push_back(std::move(p));
  }
  GridMeasure out;
  out.M = M;
  out.error_bound = std::min(1.0, facet_weight / static_cast<double>(M));
  if (out.error_bound > max_error) {
    const auto required = static_cast<long long>(std::ceil(facet_weight / max_error));
    throw ResolutionError("grid error bound " + std::to_string(out.error_bound) + " exceeds " +
                              std::to_string(max_error) + "; resolution >= " + std::to_string(required) + " required",
                          required);
  }

  // Cell centres x_j = (j + 1/2)/M, generated as c0 + j*delta so the inner
  // loop can advance every image by a fixed column increment.
  const Turns delta = turns_from_ratio(1, M);
  const Turns c0 = turns_from_ratio(1, 2 * M);
  std::uint64_t outer = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) outer *= static_cast<std::uint64_t>(M);

  auto count_rows = [&](std::uint64_t row_begin, std::uint64_t row_end) {
    std::uint64_t survivors = 0;
    std::vector<Turns> x(d), y(prep.size() * d), step(prep.size() * d);
    for (std::size_t i = 0; i < prep.size(); ++i) {
      for (std::size_t r = 0; r < d; ++r) step[i * d + r] = mul_turns(prep[i].A(r, d - 1), delta);
    }
    for (std::uint64_t row = row_begin; row < row_end; ++row) {
      std::uint64_t rem = row;
      for (std::size_t k = 0; k + 1 < d; ++k) {
        x[k] = c0 + mul_turns(static_cast<i128>(rem % static_cast<std::uint64_t>(M)), delta);
        rem /= static_cast<std::uint64_t>(M);
      }
      x[d - 1] = c0;
      for (std::size_t i = 0; i < prep.size(); ++i) {
        for (std::size_t r = 0; r < d; ++r) {
          Turns acc = prep[i].b[r];
          for (std::size_t j = 0; j < d; ++j) acc += mul_turns(prep[i].A(r, j), x[j]);
          y[i * d + r] = acc;
        }
      }
      for (std::int64_t j = 0; j < M; ++j) {
        bool all = true;
        for (std::size_t i = 0; i < prep.size() && all; ++i) all = in_union(*prep[i].boxes, &y[i * d]);
        if (all) ++survivors;
        for (std::size_t t = 0; t < y.size(); ++t) y[t] += step[t];
      }
    }
    return survivors;
  };

  // Fixed shard decomposition; integer counts make the merge order-free.
  constexpr std::uint64_t kShards = 64;
  std::vector<std::uint64_t> shard_counts(kShards, 0);
  auto shard_range = [&](std::uint64_t s) {
    return std::pair{outer * s / kShards, outer * (s + 1) / kShards};
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, kShards));
  if (workers == 1) {
    for (std::uint64_t s = 0; s < kShards; ++s) {
      auto [a, b] = shard_range(s);
      shard_counts[s] = count_rows(a, b);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < kShards; s += workers) {
          auto [a, b] = shard_range(s);
          shard_counts[s] = count_rows(a, b);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto c : shard_counts) out.survivors += c;
  out.cells = outer * static_cast<std::uint64_t>(M);
  out.value = static_cast<double>(out.survivors) / static_cast<double>(out.cells);
  return out;
}

namespace {

const uint256_t kOne = uint256_t(1) << 128;

using Pieces = std::vector<std::pair<uint256_t, uint256_t>>;  // [a, b) within [0, 2^128)

Pieces arc_pieces(const Arc& arc) {
  if (arc.full) return {{0, kOne}};
  const uint256_t a = arc.lo;
  const uint256_t b = a + uint256_t(arc.width);
  if (b <= kOne) return {{a, b}};
  return {{a, kOne}, {0, b - kOne}};
}

Pieces intersect(const Pieces& u, const Pieces& v) {
  Pieces out;
  for (const auto& [a, b] : u) {
    for (const auto& [c, e] : v) {
      const uint256_t lo = std::max(a, c);
      const uint256_t hi = std::min(b, e);
      if (lo < hi) out.emplace_back(lo, hi);
    }
  }
  return out;
}

}  // namespace

double interval_measure_exact(const std::vector<BoxConstraint>& sets) {
  if (sets.empty()) throw DomainError("interval_measure_exact needs at least one set");
  const std::size_t d = sets.front().T.dim();
  std::vector<Pieces> coord(d, Pieces{{0, kOne}});
  for (const auto& s : sets) {
    if (!s.T.is_rotation()) throw DomainError("interval_measure_exact accepts rotations only");
    if (s.T.dim() != d) throw DomainError("interval_measure_exact sets live on different tori");
    if (s.A.size() != 1) throw DomainError("interval_measure_exact needs a single box per set");
    const Box& box = s.A.front();
    if (box.sides.size() != d) throw DomainError("box dimension does not match the torus");
    const auto t = translation_power(s.T, s.n);
    for (std::size_t k = 0; k < d; ++k) {
      Arc arc = box.sides[k];
      arc.lo -= t[k].turns();  // T^{-n} A = A - t
      coord[k] = intersect(coord[k], arc_pieces(arc));
    }
  }
  double result = 1.0;
  for (const auto& pieces : coord) {
    uint256_t len = 0;
    for (const auto& [a, b] : pieces) len += b - a;
    // len / 2^128 rounded to double
    result *= std::ldexp(static_cast<double>(len >> 64), -64);
  }
  return result;
}

}  // namespace vdclab
