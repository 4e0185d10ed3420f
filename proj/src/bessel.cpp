#include "qkr/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qkr/error.hpp"

namespace qkr {
namespace {

constexpr double kRescaleAbove = 1e100;
constexpr double kRescaleBy = 1e-100;

// Unnormalised minimal solution of the three-term recurrence on [0, start].
std::vector<double> miller_sequence(double x, int start) {
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[start] = 1.0;
  for (int s = start; s >= 1; --s) {
    j[s - 1] = (2.0 * s / x) * j[s] - j[s + 1];
    if (std::abs(j[s - 1]) > kRescaleAbove) {
      for (int t = s - 1; t <= start; ++t) j[t] *= kRescaleBy;
    }
  }
  return j;
}

}  // namespace

BesselBand bessel_band(double argument, double tail_tolerance) {
  if (!(argument >= 0.0) || !std::isfinite(argument)) {
    throw DomainError("bessel_band: argument must be finite and >= 0, got " +
                      std::to_string(argument));
  }
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw DomainError("bessel_band: tail_tolerance must lie in (0, 1), got " +
                      std::to_string(tail_tolerance));
  }

  BesselBand band;
  band.argument = argument;
  band.tail_tolerance = tail_tolerance;
  if (argument == 0.0) {
    band.order_max = 0;
    band.values = {1.0};
    return band;
  }

  const double cbrt_x = std::cbrt(argument);
  int guess = static_cast<int>(std::ceil(argument + 12.0 * (cbrt_x + 1.0)));
  const int pad = std::max(15, static_cast<int>(std::ceil(0.5 * cbrt_x * 10.0)));

  for (;;) {
    const int start = guess + pad;
    std::vector<double> j = miller_sequence(argument, start);

    double sum_sq = 0.0;
    double even_sum = 0.0;
    for (int s = start; s >= 1; --s) {
      sum_sq += j[s] * j[s];
      if (s % 2 == 0) even_sum += j[s];
    }
    sum_sq = j[0] * j[0] + 2.0 * sum_sq;
    even_sum = j[0] + 2.0 * even_sum;
    const double scale = std::copysign(1.0 / std::sqrt(sum_sq), even_sum);
    for (auto& v : j) v *= scale;

    // Smallest order_max with 2 * sum_{s > order_max} J_s^2 < tolerance.
    int order_max = start;
    double tail = 0.0;
    for (int s = start; s >= 1; --s) {
      const double next_tail = tail + 2.0 * j[s] * j[s];
      if (!(next_tail < tail_tolerance)) break;
      tail = next_tail;
      order_max = s - 1;
    }
    if (order_max > guess) {
      guess = guess + guess / 2 + 10;
      continue;
    }

    band.order_max = order_max;
    band.values.assign(static_cast<std::size_t>(2 * order_max + 1), 0.0);
    for (int s = 0; s <= order_max; ++s) {
      band.values[order_max + s] = j[s];
      band.values[order_max - s] = (s % 2 == 0) ? j[s] : -j[s];
    }
    return band;
  }
}

}  // namespace qkr
