#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qkr/markov.hpp"
#include "qkr/state.hpp"

namespace qkr {

/// Per-kick observables. Energies are in units of hbar^2 / 2I, so E_k = k^2;
/// entropy is in nats.
struct DiagnosticsRecord {
  int kick_index = 0;
  double energy = 0.0;
  double markov_energy_cum = 0.0;
  double interference_energy_cum = 0.0;
  double entropy = 0.0;
  double participation_number = 0.0;
  double second_moment = 0.0;
};

/// -sum P ln P with 0 ln 0 = 0.
double entropy(const Distribution& p);
double energy(const Distribution& p);
/// 1 / sum P^2.
double participation_number(const Distribution& p);
/// sum (k - k0)^2 P_k.
double second_moment(const Distribution& p, int k0);

struct EnergySplit {
  double markov_increment = 0.0;
  double interference_increment = 0.0;
};

/// markov_increment = sum_{k,l} E_l P_k W_{l-k} dt over the basis,
/// interference_increment = sum_l E_l beta_l. Their sum is the exact energy
/// change of the step that produced beta from p_prev.
///
/// Throws ConsistencyError if p_prev and beta live on different bases.
EnergySplit energy_decomposition(const Distribution& p_prev, const InterferenceVector& beta,
                                 const std::vector<double>& w_band, double delta_t);

/// Lagrange multipliers of the maximum-entropy profile with <|k - k0|> = L0.
struct CanonicalMultipliers {
  double lambda = 0.0;  // asinh(1 / L0)
  double omega = 0.0;   // ln(L0 + sqrt(L0^2 + 1))
};
CanonicalMultipliers canonical_multipliers(double l0);

/// P_k = e^{-omega} e^{-lambda |k - k0|}, not renormalised to the basis.
/// Throws DomainError if l0 <= 0.
Distribution canonical_profile(double l0, int k0, int basis_halfwidth);

struct LocalizationFit {
  double length_estimate = 0.0;  // L0 with lambda = asinh(1 / L0)
  double lambda = 0.0;           // fitted decay rate of ln P in |k - k0|
  double log_intercept = 0.0;
  double fit_quality = 0.0;      // weighted R^2 of the log-linear fit
  int window_min = 0;
  int window_max = 0;
  int points = 0;
};

/// Least-squares line through ln P vs |k - k0| after symmetrising P about k0,
/// using only the points with P > floor. Each |k - k0| > 0 carries weight 2
/// (it stands for two lattice sites), |k - k0| = 0 weight 1.
///
/// Throws InsufficientDataError with fewer than 8 points above floor, and
/// DomainError for a non-positive floor or a non-decaying profile.
LocalizationFit fit_localization(const Distribution& p, int k0, double floor = 1e-12);

/// entropy_by_kick[n] is S after n kicks. Returns the first n >= window at
/// which the least-squares slope of S over kicks n - window .. n falls below
/// slope_threshold (nats per kick).
std::optional<int> saturation_kick(std::span<const double> entropy_by_kick, int window = 100,
                                   double slope_threshold = 1e-3);

}  // namespace qkr
