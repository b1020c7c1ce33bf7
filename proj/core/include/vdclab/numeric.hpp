#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace vdclab {

/// Neumaier-compensated running sum.
class KahanSum {
 public:
  KahanSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexKahanSum {
 public:
  ComplexKahanSum& operator+=(std::complex<double> z) {
    re_ += z.real();
    im_ += z.imag();
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

/// In-place FFT (FFTW); size must be a power of two. inverse=true uses
/// exp(+2 pi i jk/n) and does not rescale.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

std::size_t next_pow2(std::size_t n);

}  // namespace vdclab
