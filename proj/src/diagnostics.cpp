#include "qkr/diagnostics.hpp"

#include <cmath>
#include <string>

#include "qkr/error.hpp"

namespace qkr {

double entropy(const Distribution& p) {
  double s = 0.0;
  for (double v : p.probabilities) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

double energy(const Distribution& p) {
  const Basis basis = p.basis();
  double e = 0.0;
  for (int k = -basis.halfwidth; k <= basis.halfwidth; ++k) {
    e += static_cast<double>(k) * static_cast<double>(k) * p.probabilities[basis.index(k)];
  }
  return e;
}

double participation_number(const Distribution& p) {
  double sum_sq = 0.0;
  for (double v : p.probabilities) sum_sq += v * v;
  return 1.0 / sum_sq;
}

double second_moment(const Distribution& p, int k0) {
  const Basis basis = p.basis();
  double m = 0.0;
  for (int k = -basis.halfwidth; k <= basis.halfwidth; ++k) {
    const double d = static_cast<double>(k - k0);
    m += d * d * p.probabilities[basis.index(k)];
  }
  return m;
}

EnergySplit energy_decomposition(const Distribution& p_prev, const InterferenceVector& beta,
                                 const std::vector<double>& w_band, double delta_t) {
  if (p_prev.halfwidth != beta.halfwidth ||
      p_prev.probabilities.size() != beta.beta.size()) {
    throw ConsistencyError("energy_decomposition: P and beta are on different bases");
  }
  if (w_band.size() % 2 != 1) {
    throw ConsistencyError("energy_decomposition: rate band must have odd length");
  }
  const int reach = static_cast<int>(w_band.size() / 2);
  const Basis basis = p_prev.basis();
  const int n = basis.halfwidth;

  // Rows whose whole band lies inside the basis only need the band moments
  // of W dt: sum_s W_s dt (k + s)^2 = k^2 m0 + 2 k m1 + m2.
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int s = -reach; s <= reach; ++s) {
    const double w = w_band[s + reach] * delta_t;
    m0 += w;
    m1 += w * s;
    m2 += w * static_cast<double>(s) * s;
  }

  double markov = 0.0;
  for (int k = -n; k <= n; ++k) {
    const double pk = p_prev.probabilities[basis.index(k)];
    if (pk == 0.0) continue;
    const double kd = static_cast<double>(k);
    double row = 0.0;
    if (k - reach >= -n && k + reach <= n) {
      row = kd * kd * m0 + 2.0 * kd * m1 + m2;
    } else {
      for (int s = -reach; s <= reach; ++s) {
        const int l = k + s;
        if (!basis.contains(l)) continue;
        row += w_band[s + reach] * delta_t * static_cast<double>(l) * l;
      }
    }
    markov += pk * row;
  }

  double interference = 0.0;
  for (int k = -n; k <= n; ++k) {
    interference += static_cast<double>(k) * k * beta.beta[basis.index(k)];
  }
  return {markov, interference};
}

CanonicalMultipliers canonical_multipliers(double l0) {
  if (!(l0 > 0.0) || !std::isfinite(l0)) {
    throw DomainError("canonical_profile: L0 must be finite and > 0, got " + std::to_string(l0));
  }
  return {std::asinh(1.0 / l0), std::log(l0 + std::sqrt(l0 * l0 + 1.0))};
}

Distribution canonical_profile(double l0, int k0, int basis_halfwidth) {
  const CanonicalMultipliers cm = canonical_multipliers(l0);
  const Basis basis{basis_halfwidth};
  if (!basis.contains(k0)) throw DomainError("canonical_profile: k0 outside basis");
  Distribution p;
  p.halfwidth = basis_halfwidth;
  p.probabilities.resize(static_cast<std::size_t>(basis.size()));
  for (int k = -basis_halfwidth; k <= basis_halfwidth; ++k) {
    p.probabilities[basis.index(k)] = std::exp(-cm.omega - cm.lambda * std::abs(k - k0));
  }
  return p;
}

LocalizationFit fit_localization(const Distribution& p, int k0, double floor) {
  if (!(floor > 0.0)) throw DomainError("fit_localization: floor must be > 0");
  const Basis basis = p.basis();
  if (!basis.contains(k0)) throw DomainError("fit_localization: k0 outside basis");

  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> xs, ys, ws;
  LocalizationFit fit;
  fit.window_min = -1;
  const int reach = basis.halfwidth + std::abs(k0);
  for (int d = 0; d <= reach; ++d) {
    const double value = d == 0 ? p.at(k0) : 0.5 * (p.at(k0 + d) + p.at(k0 - d));
    if (!(value > floor)) continue;
    const double w = d == 0 ? 1.0 : 2.0;
    const double x = d;
    const double y = std::log(value);
    xs.push_back(x);
    ys.push_back(y);
    ws.push_back(w);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    if (fit.window_min < 0) fit.window_min = d;
    fit.window_max = d;
  }
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 8) {
    throw InsufficientDataError("fit_localization: only " + std::to_string(fit.points) +
                                " points above floor " + std::to_string(floor) +
                                " (need 8)");
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  const double cxx = sxx / sw - mx * mx;
  const double cxy = sxy / sw - mx * my;
  const double slope = cxy / cxx;
  if (!(slope < 0.0)) {
    throw DomainError("fit_localization: profile does not decay away from k0");
  }
  fit.lambda = -slope;
  fit.log_intercept = my - slope * mx;
  fit.length_estimate = 1.0 / std::sinh(fit.lambda);

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.log_intercept + slope * xs[i]);
    ss_res += ws[i] * r * r;
    ss_tot += ws[i] * (ys[i] - my) * (ys[i] - my);
  }
  fit.fit_quality = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::optional<int> saturation_kick(std::span<const double> entropy_by_kick, int window,
                                   double slope_threshold) {
  if (window < 1) throw DomainError("saturation_kick: window must be >= 1");
  const int count = static_cast<int>(entropy_by_kick.size());
  // Over x = 0..window, the mean and variance of x are fixed.
  const double mean_x = 0.5 * window;
  double var_x = 0.0;
  for (int i = 0; i <= window; ++i) var_x += (i - mean_x) * (i - mean_x);
  for (int n = window; n < count; ++n) {
    double mean_y = 0.0;
    for (int i = 0; i <= window; ++i) mean_y += entropy_by_kick[n - window + i];
    mean_y /= window + 1;
    double cov = 0.0;
    for (int i = 0; i <= window; ++i) {
      cov += (i - mean_x) * (entropy_by_kick[n - window + i] - mean_y);
    }
    if (cov / var_x < slope_threshold) return n;
  }
  return std::nullopt;
}

}  // namespace qkr
