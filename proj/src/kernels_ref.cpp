#include <algorithm>
#include <cassert>

#include "qkr/kernels.hpp"

namespace qkr::kernels::ref {

void banded_apply(std::span<const std::complex<double>> coeffs, int reach,
                  std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  assert(coeffs.size() == static_cast<std::size_t>(2 * reach + 1));
  assert(in.size() == out.size());
  const int n = static_cast<int>(in.size());
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (int l = std::max(0, k - reach); l <= std::min(n - 1, k + reach); ++l) {
      acc += coeffs[l - k + reach] * in[l];
    }
    out[k] = acc;
  }
}

void band_convolve(std::span<const double> coeffs, int reach,
                   std::span<const double> in, std::span<double> out) {
  assert(coeffs.size() == static_cast<std::size_t>(2 * reach + 1));
  assert(in.size() == out.size());
  const int n = static_cast<int>(in.size());
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int l = std::max(0, k - reach); l <= std::min(n - 1, k + reach); ++l) {
      acc += coeffs[l - k + reach] * in[l];
    }
    out[k] = acc;
  }
}

}  // namespace qkr::kernels::ref
