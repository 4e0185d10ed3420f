#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "qkr/error.hpp"
#include "qkr/propagate.hpp"

namespace qkr {
namespace {

// FFTW's planner is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

int spectral_grid_size(int basis_halfwidth) {
  const int needed = 2 * (2 * basis_halfwidth + 1);
  int m = 1;
  while (m < needed) m *= 2;
  return m;
}

struct SpectralPropagator::Impl {
  int halfwidth;
  int grid;
  std::unique_ptr<fftw_complex, FftwFree> buffer;
  fftw_plan to_angle = nullptr;
  fftw_plan to_momentum = nullptr;
  struct KickPhase {
    double kappa;
    std::vector<Complex> phase;  // e^{-i kappa cos(theta_j)} / grid
  };
  std::vector<KickPhase> kicks;
  FreePhaseTable free_phases;

  Impl(int n, const std::vector<double>& kappas)
      : halfwidth(n), grid(spectral_grid_size(n)) {
    buffer.reset(fftw_alloc_complex(static_cast<std::size_t>(grid)));
    {
      // FFTW_ESTIMATE keeps the chosen algorithm, and hence the rounding,
      // identical from run to run.
      std::lock_guard lock(planner_mutex());
      to_angle = fftw_plan_dft_1d(grid, buffer.get(), buffer.get(), FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
      to_momentum = fftw_plan_dft_1d(grid, buffer.get(), buffer.get(), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
    }
    for (double kappa : kappas) {
      KickPhase kp{kappa, std::vector<Complex>(static_cast<std::size_t>(grid))};
      for (int j = 0; j < grid; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / grid;
        const double angle = -kappa * std::cos(theta);
        kp.phase[j] = Complex{std::cos(angle), std::sin(angle)} / static_cast<double>(grid);
      }
      kicks.push_back(std::move(kp));
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(to_angle);
    fftw_destroy_plan(to_momentum);
  }

  const std::vector<Complex>& kick_for(double kappa) const {
    for (const auto& k : kicks) {
      if (k.kappa == kappa) return k.phase;
    }
    throw ConsistencyError("SpectralPropagator: no kick phase for kappa = " +
                           std::to_string(kappa));
  }

  int slot(int k) const { return k >= 0 ? k : k + grid; }
};

// Plain product; std::complex operator* carries an inf/nan recovery branch
// that blocks vectorisation.
static inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

SpectralPropagator::SpectralPropagator(int basis_halfwidth, const std::vector<double>& kappas)
    : impl_(std::make_unique<Impl>(basis_halfwidth, kappas)) {}

SpectralPropagator::~SpectralPropagator() = default;

int SpectralPropagator::grid_size() const { return impl_->grid; }

void SpectralPropagator::advance(QuantumState& state, const FloquetStep& step) {
  Impl& im = *impl_;
  if (state.halfwidth != im.halfwidth) {
    throw ConsistencyError("SpectralPropagator: state basis does not match the grid");
  }
  const auto& kick = im.kick_for(step.kappa);
  auto* g = reinterpret_cast<Complex*>(im.buffer.get());
  std::fill(g, g + im.grid, Complex{0.0, 0.0});
  const Basis basis = state.basis();
  const auto& phases = im.free_phases.get(step.tau, basis.halfwidth);
  for (int k = -basis.halfwidth; k <= basis.halfwidth; ++k) {
    g[im.slot(k)] = mul(state.amplitudes[basis.index(k)], phases[basis.index(k)]);
  }
  fftw_execute(im.to_angle);
  for (int j = 0; j < im.grid; ++j) g[j] = mul(g[j], kick[j]);
  fftw_execute(im.to_momentum);
  for (int k = -basis.halfwidth; k <= basis.halfwidth; ++k) {
    state.amplitudes[basis.index(k)] = g[im.slot(k)];
  }
}

QuantumState apply_step_spectral(const QuantumState& state, const FloquetStep& step) {
  SpectralPropagator propagator(state.halfwidth, {step.kappa});
  QuantumState out = state;
  propagator.advance(out, step);
  return out;
}

}  // namespace qkr
