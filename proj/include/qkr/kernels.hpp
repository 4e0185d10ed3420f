#pragma once

// Translation-invariant band products on a truncated line:
//
//   out[k] = sum_{l : |l - k| <= reach, 0 <= l < n} coeffs[l - k + reach] * in[l]
//
// Both propagation (complex coefficients i^{-s} J_s) and the Markov step
// (real coefficients J_s^2) reduce to this. The `ref` namespace holds the
// plain serial loops the tests and benchmarks compare against; the
// unqualified versions are the OpenMP kernels used by the library.

#include <complex>
#include <span>

namespace qkr::kernels {

namespace ref {

void banded_apply(std::span<const std::complex<double>> coeffs, int reach,
                  std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out);

void band_convolve(std::span<const double> coeffs, int reach,
                   std::span<const double> in, std::span<double> out);

}  // namespace ref

void banded_apply(std::span<const std::complex<double>> coeffs, int reach,
                  std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out);

void band_convolve(std::span<const double> coeffs, int reach,
                   std::span<const double> in, std::span<double> out);

/// Sets flush-to-zero / denormals-are-zero for the calling thread and
/// restores the previous mode on destruction. Far tails of a propagating
/// state sit in the subnormal range, where x86 arithmetic is many times
/// slower; zeroing them changes probabilities only below 1e-300.
class ScopedFlushDenormals {
 public:
  ScopedFlushDenormals();
  ~ScopedFlushDenormals();
  ScopedFlushDenormals(const ScopedFlushDenormals&) = delete;
  ScopedFlushDenormals& operator=(const ScopedFlushDenormals&) = delete;

 private:
  unsigned int saved_ = 0;
};

}  // namespace qkr::kernels
