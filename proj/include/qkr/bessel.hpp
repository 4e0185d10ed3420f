#pragma once

#include <vector>

namespace qkr {

/// Integer-order Bessel functions J_s(x) of the first kind at one fixed
/// argument, for all orders |s| <= order_max.
///
/// Only the non-negative orders are computed; negative orders are derived
/// through J_{-s} = (-1)^s J_s, so the symmetry holds bit for bit.
struct BesselBand {
  int order_max = 0;
  double argument = 0.0;
  double tail_tolerance = 0.0;
  /// J_{-order_max} .. J_{order_max}; values[s + order_max] holds J_s.
  std::vector<double> values;

  double operator[](int s) const {
    return (s < -order_max || s > order_max) ? 0.0 : values[s + order_max];
  }
  int size() const { return 2 * order_max + 1; }
};

/// Miller downward recurrence normalised by sum_s J_s^2 = 1. The band is cut
/// at the smallest order_max whose discarded probability
/// sum_{|s|>order_max} J_s^2 stays below tail_tolerance.
///
/// Throws DomainError if argument < 0 or tail_tolerance is not in (0, 1).
BesselBand bessel_band(double argument, double tail_tolerance);

}  // namespace qkr
