#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qkr {

using Complex = std::complex<double>;

/// Truncated angular-momentum basis k = -halfwidth .. halfwidth.
struct Basis {
  int halfwidth = 0;

  int size() const { return 2 * halfwidth + 1; }
  bool contains(int k) const { return k >= -halfwidth && k <= halfwidth; }
  std::size_t index(int k) const { return static_cast<std::size_t>(k + halfwidth); }
  int momentum(std::size_t index) const { return static_cast<int>(index) - halfwidth; }
};

/// Rotor wavefunction sum_k a_k |k> on a truncated basis.
struct QuantumState {
  std::vector<Complex> amplitudes;
  int center = 0;
  int halfwidth = 0;

  Basis basis() const { return Basis{halfwidth}; }
  Complex amplitude(int k) const { return amplitudes[basis().index(k)]; }
  double norm_squared() const;
};

/// Occupation probabilities P_k over a truncated basis.
struct Distribution {
  std::vector<double> probabilities;
  int halfwidth = 0;

  Basis basis() const { return Basis{halfwidth}; }
  double at(int k) const {
    return basis().contains(k) ? probabilities[basis().index(k)] : 0.0;
  }
  double total() const;
};

/// One application of the Floquet map: kick of strength kappa = K/hbar
/// followed by free rotation over the scaled interval tau = hbar*dt/I.
struct FloquetStep {
  double kappa = 0.0;
  double tau = 1.0;

  FloquetStep() = default;
  /// Throws DomainError unless kappa >= 0 and tau > 0.
  FloquetStep(double kappa, double tau);
};

QuantumState initial_state(int k0, int basis_halfwidth);

Distribution occupation(const QuantumState& state);

/// e^{-i tau k^2 / 2}, the free-rotor phase over one interval.
Complex free_phase(double tau, int k);

/// free_phase(tau, k) for k = -N..N, indexed like QuantumState::amplitudes.
/// Recomputed only when tau changes.
class FreePhaseTable {
 public:
  const std::vector<Complex>& get(double tau, int basis_halfwidth);

 private:
  double tau_ = -1.0;
  int halfwidth_ = -1;
  std::vector<Complex> phases_;
};

/// i^{-s}, evaluated exactly from s mod 4.
Complex inverse_quarter_turn(int s);

}  // namespace qkr
