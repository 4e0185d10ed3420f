#include <algorithm>
#include <cassert>
#include <vector>

#include "qkr/kernels.hpp"

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace qkr::kernels {

namespace {

// Rows are processed in cache-sized blocks; inside a block each band offset
// s is one unit-stride axpy over k, which vectorises cleanly.
constexpr int kBlock = 512;

}  // namespace

void banded_apply(std::span<const std::complex<double>> coeffs, int reach,
                  std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  assert(coeffs.size() == static_cast<std::size_t>(2 * reach + 1));
  assert(in.size() == out.size());
  const int n = static_cast<int>(in.size());
  const int width = 2 * reach + 1;

  // Split planes: std::complex multiplication does not vectorise because of
  // its inf/nan recovery path, and `in` may alias `out`.
  thread_local std::vector<double> planes;
  planes.resize(static_cast<std::size_t>(4 * n + 2 * width));
  double* in_re = planes.data();
  double* in_im = in_re + n;
  double* out_re = in_im + n;
  double* out_im = out_re + n;
  double* c_re = out_im + n;
  double* c_im = c_re + width;
  for (int i = 0; i < n; ++i) {
    in_re[i] = in[i].real();
    in_im[i] = in[i].imag();
  }
  for (int i = 0; i < width; ++i) {
    c_re[i] = coeffs[i].real();
    c_im[i] = coeffs[i].imag();
  }

  const int blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (blocks > 4)
  for (int b = 0; b < blocks; ++b) {
    const int k_begin = b * kBlock;
    const int k_end = std::min(n, k_begin + kBlock);
    double* ore = out_re;
    double* oim = out_im;
    for (int k = k_begin; k < k_end; ++k) {
      ore[k] = 0.0;
      oim[k] = 0.0;
    }
    for (int s = -reach; s <= reach; ++s) {
      const int lo = std::max(k_begin, -s);
      const int hi = std::min(k_end, n - s);
      const double cr = c_re[s + reach];
      const double ci = c_im[s + reach];
      const double* br = in_re + s;
      const double* bi = in_im + s;
      // The rotor kernel i^{-s} J_s is purely real or purely imaginary.
      if (ci == 0.0) {
#pragma omp simd
        for (int k = lo; k < hi; ++k) {
          ore[k] += cr * br[k];
          oim[k] += cr * bi[k];
        }
      } else if (cr == 0.0) {
#pragma omp simd
        for (int k = lo; k < hi; ++k) {
          ore[k] -= ci * bi[k];
          oim[k] += ci * br[k];
        }
      } else {
#pragma omp simd
        for (int k = lo; k < hi; ++k) {
          ore[k] += cr * br[k] - ci * bi[k];
          oim[k] += cr * bi[k] + ci * br[k];
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) out[i] = {out_re[i], out_im[i]};
}

void band_convolve(std::span<const double> coeffs, int reach,
                   std::span<const double> in, std::span<double> out) {
  assert(coeffs.size() == static_cast<std::size_t>(2 * reach + 1));
  assert(in.size() == out.size());
  assert(in.data() != out.data());
  const int n = static_cast<int>(in.size());
  const double* c = coeffs.data();
  const double* x = in.data();
  double* y = out.data();

  const int blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (blocks > 4)
  for (int b = 0; b < blocks; ++b) {
    const int k_begin = b * kBlock;
    const int k_end = std::min(n, k_begin + kBlock);
    for (int k = k_begin; k < k_end; ++k) y[k] = 0.0;
    for (int s = -reach; s <= reach; ++s) {
      const int lo = std::max(k_begin, -s);
      const int hi = std::min(k_end, n - s);
      const double cs = c[s + reach];
      const double* xs = x + s;
#pragma omp simd
      for (int k = lo; k < hi; ++k) y[k] += cs * xs[k];
    }
  }
}

#if defined(__SSE__)
ScopedFlushDenormals::ScopedFlushDenormals() : saved_(_mm_getcsr()) {
  _mm_setcsr(saved_ | 0x8040u);  // FTZ | DAZ
}
ScopedFlushDenormals::~ScopedFlushDenormals() { _mm_setcsr(saved_); }
#else
ScopedFlushDenormals::ScopedFlushDenormals() = default;
ScopedFlushDenormals::~ScopedFlushDenormals() = default;
#endif

}  // namespace qkr::kernels
