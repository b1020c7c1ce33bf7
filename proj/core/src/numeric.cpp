#include "vdclab/numeric.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

#include "vdclab/error.hpp"

namespace vdclab {
namespace {

// Plans are created once per (size, direction) with FFTW_ESTIMATE, so the
// transform is the same on every run regardless of machine load.
fftw_plan plan_for(std::size_t n, bool inverse) {
  static std::mutex m;
  static std::map<std::pair<std::size_t, bool>, fftw_plan> cache;
  std::lock_guard lock(m);
  auto [it, inserted] = cache.try_emplace({n, inverse}, nullptr);
  if (inserted) {
    std::vector<std::complex<double>> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    it->second = fftw_plan_dft_1d(static_cast<int>(n), p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  return it->second;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if ((n & (n - 1)) != 0) throw DomainError("fft size must be a power of two");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(plan_for(n, inverse), p, p);
}

}  // namespace vdclab
