#include "qkr/propagate.hpp"

#include <string>

#include "qkr/error.hpp"
#include "qkr/kernels.hpp"

namespace qkr {
namespace {

std::vector<Complex> kick_coefficients(const BesselBand& band) {
  // coeffs[s + m] multiplies a_{k+s} in row k: i^{-s} J_s.
  std::vector<Complex> coeffs(static_cast<std::size_t>(band.size()));
  for (int s = -band.order_max; s <= band.order_max; ++s) {
    const Complex q = inverse_quarter_turn(s);
    const double j = band[s];
    coeffs[s + band.order_max] = {q.real() * j, q.imag() * j};
  }
  return coeffs;
}

void apply_free_phase(QuantumState& state, const std::vector<Complex>& phases) {
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    auto& a = state.amplitudes[i];
    const Complex f = phases[i];
    a = {a.real() * f.real() - a.imag() * f.imag(), a.real() * f.imag() + a.imag() * f.real()};
  }
}

}  // namespace

QuantumState apply_step_banded(const QuantumState& state, const FloquetStep& step,
                               const BesselBand& band) {
  if (band.argument != step.kappa) {
    throw ConsistencyError("apply_step_banded: band built for kappa = " +
                           std::to_string(band.argument) + " but step has kappa = " +
                           std::to_string(step.kappa));
  }
  QuantumState phased = state;
  FreePhaseTable table;
  apply_free_phase(phased, table.get(step.tau, state.halfwidth));
  QuantumState out = state;
  kernels::banded_apply(kick_coefficients(band), band.order_max, phased.amplitudes,
                        out.amplitudes);
  return out;
}

BandedPropagator::BandedPropagator(const std::vector<BesselBand>& bands) {
  for (const auto& band : bands) {
    kernels_.push_back({band.argument, band.order_max, kick_coefficients(band)});
  }
}

const BandedPropagator::Kernel& BandedPropagator::kernel_for(double kappa) const {
  for (const auto& k : kernels_) {
    if (k.kappa == kappa) return k;
  }
  throw ConsistencyError("BandedPropagator: no band for kappa = " + std::to_string(kappa));
}

void BandedPropagator::advance(QuantumState& state, const FloquetStep& step) {
  const Kernel& kernel = kernel_for(step.kappa);
  apply_free_phase(state, phases_.get(step.tau, state.halfwidth));
  scratch_.resize(state.amplitudes.size());
  kernels::banded_apply(kernel.coeffs, kernel.reach, state.amplitudes, scratch_);
  state.amplitudes.swap(scratch_);
}

}  // namespace qkr
