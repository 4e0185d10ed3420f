#include "qkr/state.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qkr/error.hpp"

namespace qkr {

double QuantumState::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum;
}

double Distribution::total() const {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

FloquetStep::FloquetStep(double kappa_, double tau_) : kappa(kappa_), tau(tau_) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("FloquetStep: kappa must be finite and >= 0");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError("FloquetStep: tau must be finite and > 0");
  }
}

QuantumState initial_state(int k0, int basis_halfwidth) {
  if (basis_halfwidth < 0) {
    throw DomainError("initial_state: basis_halfwidth must be >= 0");
  }
  const Basis basis{basis_halfwidth};
  if (!basis.contains(k0)) {
    throw DomainError("initial_state: k0 = " + std::to_string(k0) +
                      " lies outside the basis [-" + std::to_string(basis_halfwidth) +
                      ", " + std::to_string(basis_halfwidth) + "]");
  }
  QuantumState state;
  state.center = k0;
  state.halfwidth = basis_halfwidth;
  state.amplitudes.assign(static_cast<std::size_t>(basis.size()), Complex{0.0, 0.0});
  state.amplitudes[basis.index(k0)] = Complex{1.0, 0.0};
  return state;
}

Distribution occupation(const QuantumState& state) {
  Distribution p;
  p.halfwidth = state.halfwidth;
  p.probabilities.resize(state.amplitudes.size());
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    p.probabilities[i] = std::norm(state.amplitudes[i]);
  }
  return p;
}

Complex free_phase(double tau, int k) {
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  const double angle = -0.5 * tau * kk;
  return {std::cos(angle), std::sin(angle)};
}

const std::vector<Complex>& FreePhaseTable::get(double tau, int basis_halfwidth) {
  if (tau != tau_ || basis_halfwidth != halfwidth_) {
    phases_.resize(static_cast<std::size_t>(2 * basis_halfwidth + 1));
    for (int k = -basis_halfwidth; k <= basis_halfwidth; ++k) {
      phases_[static_cast<std::size_t>(k + basis_halfwidth)] = free_phase(tau, k);
    }
    tau_ = tau;
    halfwidth_ = basis_halfwidth;
  }
  return phases_;
}

Complex inverse_quarter_turn(int s) {
  switch (((s % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace qkr
