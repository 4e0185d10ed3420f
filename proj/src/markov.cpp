#include "qkr/markov.hpp"

#include <cmath>
#include <string>

#include "qkr/bessel.hpp"
#include "qkr/error.hpp"
#include "qkr/kernels.hpp"

namespace qkr {

TransitionMatrix transition_band(double kappa, double tail_tolerance) {
  const BesselBand band = bessel_band(kappa, tail_tolerance);
  TransitionMatrix t;
  t.kappa = kappa;
  t.tail_tolerance = tail_tolerance;
  t.reach = band.order_max;
  t.band_values.resize(band.values.size());
  for (std::size_t i = 0; i < band.values.size(); ++i) {
    t.band_values[i] = band.values[i] * band.values[i];
  }
  return t;
}

void markov_step_into(const Distribution& p, const TransitionMatrix& t, Distribution& out) {
  out.halfwidth = p.halfwidth;
  out.probabilities.resize(p.probabilities.size());
  // T_{k-l} = T_{l-k}, so the band is its own reflection.
  kernels::band_convolve(t.band_values, t.reach, p.probabilities, out.probabilities);
}

Distribution markov_step(const Distribution& p, const TransitionMatrix& t) {
  Distribution out;
  markov_step_into(p, t, out);
  return out;
}

Distribution master_equation_step(const Distribution& p, const std::vector<double>& w_band,
                                  double delta_t) {
  if (w_band.size() % 2 != 1) {
    throw ConsistencyError("master_equation_step: rate band must have odd length");
  }
  const int reach = static_cast<int>(w_band.size() / 2);
  double loss_rate = 0.0;
  for (int s = -reach; s <= reach; ++s) {
    if (s != 0) loss_rate += w_band[s + reach];
  }
  const Basis basis = p.basis();
  Distribution out = p;
  for (int k = -basis.halfwidth; k <= basis.halfwidth; ++k) {
    double gain = 0.0;
    for (int s = -reach; s <= reach; ++s) {
      const int l = k + s;
      if (s == 0 || !basis.contains(l)) continue;
      gain += w_band[s + reach] * p.probabilities[basis.index(l)];
    }
    const double pk = p.probabilities[basis.index(k)];
    out.probabilities[basis.index(k)] = pk + (gain - loss_rate * pk) * delta_t;
  }
  return out;
}

InterferenceVector interference_residual(const Distribution& p_next,
                                         const Distribution& p_prev,
                                         const TransitionMatrix& t) {
  if (p_next.probabilities.size() != p_prev.probabilities.size()) {
    throw ConsistencyError("interference_residual: distributions on different bases");
  }
  const Distribution markov = markov_step(p_prev, t);
  InterferenceVector r;
  r.halfwidth = p_next.halfwidth;
  r.beta.resize(p_next.probabilities.size());
  for (std::size_t i = 0; i < r.beta.size(); ++i) {
    r.beta[i] = p_next.probabilities[i] - markov.probabilities[i];
  }
  return r;
}

std::vector<double> rate_band(const TransitionMatrix& t, double delta_t) {
  if (!(delta_t > 0.0)) {
    throw DomainError("rate_band: delta_t must be > 0, got " + std::to_string(delta_t));
  }
  std::vector<double> w(t.band_values.size());
  for (int s = -t.reach; s <= t.reach; ++s) {
    w[s + t.reach] = (t[s] - (s == 0 ? 1.0 : 0.0)) / delta_t;
  }
  return w;
}

double diffusion_coefficient(const TransitionMatrix& t, double delta_t) {
  const std::vector<double> w = rate_band(t, delta_t);
  double d = 0.0;
  for (int l = t.reach; l >= 1; --l) {
    d += w[l + t.reach] * static_cast<double>(l) * static_cast<double>(l);
  }
  return 2.0 * d;
}

Distribution discrete_gaussian(double variance, int k0, int basis_halfwidth) {
  if (!(variance >= 0.0)) throw DomainError("discrete_gaussian: variance must be >= 0");
  const Basis basis{basis_halfwidth};
  if (!basis.contains(k0)) throw DomainError("discrete_gaussian: k0 outside basis");
  Distribution p;
  p.halfwidth = basis_halfwidth;
  p.probabilities.assign(static_cast<std::size_t>(basis.size()), 0.0);
  if (variance == 0.0) {
    p.probabilities[basis.index(k0)] = 1.0;
    return p;
  }
  // Terms below exp(-745) underflow; stop there instead of calling exp.
  const double cutoff = std::sqrt(2.0 * 745.0 * variance);
  double total = 0.0;
  for (int k = -basis_halfwidth; k <= basis_halfwidth; ++k) {
    const double d = static_cast<double>(k - k0);
    if (std::abs(d) > cutoff) continue;
    const double v = std::exp(-d * d / (2.0 * variance));
    p.probabilities[basis.index(k)] = v;
    total += v;
  }
  for (auto& v : p.probabilities) v /= total;
  return p;
}

Distribution gaussian_reference(double d, int kicks, int k0, int basis_halfwidth,
                                double delta_t) {
  if (!(d >= 0.0)) throw DomainError("gaussian_reference: d must be >= 0");
  if (kicks < 1) throw DomainError("gaussian_reference: kicks must be >= 1");
  if (!(delta_t > 0.0)) throw DomainError("gaussian_reference: delta_t must be > 0");
  return discrete_gaussian(d * kicks * delta_t, k0, basis_halfwidth);
}

}  // namespace qkr
