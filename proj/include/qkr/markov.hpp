#pragma once

#include <vector>

#include "qkr/state.hpp"

namespace qkr {

/// T_kl = |U_kl|^2 = J_{l-k}(kappa)^2. The free phase has unit modulus, so
/// T depends only on s = l - k and is stored as that band.
struct TransitionMatrix {
  double kappa = 0.0;
  double tail_tolerance = 0.0;
  int reach = 0;
  std::vector<double> band_values;  // band_values[s + reach] = T_s

  double operator[](int s) const {
    return (s < -reach || s > reach) ? 0.0 : band_values[s + reach];
  }
};

/// beta_k: exact quantum update minus its Markov part.
struct InterferenceVector {
  std::vector<double> beta;
  int halfwidth = 0;
};

TransitionMatrix transition_band(double kappa, double tail_tolerance);

/// P'_k = sum_l T_{k-l} P_l restricted to the basis.
Distribution markov_step(const Distribution& p, const TransitionMatrix& t);

/// In-place form used by the ensemble driver; `out` is resized as needed.
void markov_step_into(const Distribution& p, const TransitionMatrix& t, Distribution& out);

/// Gain-loss form P + sum_{l != k} (W_kl P_l - W_lk P_k) dt. Algebraically
/// identical to markov_step on the infinite lattice; the loss rate uses the
/// full band, so the two agree on a truncated basis as well.
Distribution master_equation_step(const Distribution& p, const std::vector<double>& w_band,
                                  double delta_t);

/// beta_k = p_next_k - sum_l T_{k-l} p_prev_l.
InterferenceVector interference_residual(const Distribution& p_next,
                                         const Distribution& p_prev,
                                         const TransitionMatrix& t);

/// W_s = (T_s - delta_{s0}) / dt, indexed like TransitionMatrix::band_values.
std::vector<double> rate_band(const TransitionMatrix& t, double delta_t);

/// D = 2 sum_{l >= 1} W_l l^2; equals kappa^2 / (2 dt) for the rotor band.
double diffusion_coefficient(const TransitionMatrix& t, double delta_t);

/// Normalised discrete gaussian centred at k0 with the given variance;
/// variance 0 gives the delta distribution.
Distribution discrete_gaussian(double variance, int k0, int basis_halfwidth);

/// Continuum diffusion solution after `kicks` intervals of length delta_t
/// with diffusion coefficient d: variance d * kicks * delta_t.
Distribution gaussian_reference(double d, int kicks, int k0, int basis_halfwidth,
                                double delta_t = 1.0);

}  // namespace qkr
