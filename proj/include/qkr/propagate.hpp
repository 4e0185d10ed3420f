#pragma once

#include <memory>
#include <vector>

#include "qkr/bessel.hpp"
#include "qkr/state.hpp"

namespace qkr {

/// a'_k = sum_l i^{-(l-k)} J_{l-k}(kappa) e^{-i tau l^2/2} a_l, with the sum
/// restricted to |l - k| <= band.order_max and to the basis.
///
/// Throws ConsistencyError if band.argument != step.kappa.
QuantumState apply_step_banded(const QuantumState& state, const FloquetStep& step,
                               const BesselBand& band);

/// Same map, factorised as free phase in the momentum representation and
/// kick phase e^{-i kappa cos(theta)} on an angle grid of
/// 2^p >= 2 (2N + 1) points.
QuantumState apply_step_spectral(const QuantumState& state, const FloquetStep& step);

/// Reusable in-place stepper. Instances own scratch buffers and are not
/// shared between threads; the shared inputs they are built from are
/// read-only.
class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual void advance(QuantumState& state, const FloquetStep& step) = 0;
};

class BandedPropagator final : public Propagator {
 public:
  /// One band per kick strength that will be used; `bands` must outlive the
  /// propagator.
  explicit BandedPropagator(const std::vector<BesselBand>& bands);
  void advance(QuantumState& state, const FloquetStep& step) override;

 private:
  struct Kernel {
    double kappa;
    int reach;
    std::vector<Complex> coeffs;
  };
  const Kernel& kernel_for(double kappa) const;

  std::vector<Kernel> kernels_;
  std::vector<Complex> scratch_;
  FreePhaseTable phases_;
};

class SpectralPropagator final : public Propagator {
 public:
  SpectralPropagator(int basis_halfwidth, const std::vector<double>& kappas);
  ~SpectralPropagator() override;
  SpectralPropagator(const SpectralPropagator&) = delete;
  SpectralPropagator& operator=(const SpectralPropagator&) = delete;

  void advance(QuantumState& state, const FloquetStep& step) override;
  int grid_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Smallest power of two >= 2 (2N + 1).
int spectral_grid_size(int basis_halfwidth);

}  // namespace qkr
