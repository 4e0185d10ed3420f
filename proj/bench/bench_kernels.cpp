// Serial reference vs OpenMP kernels, plus the two full propagation paths.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "qkr/bessel.hpp"
#include "qkr/kernels.hpp"
#include "qkr/markov.hpp"
#include "qkr/propagate.hpp"

namespace {

constexpr double kKappa = 21.0;
constexpr double kTail = 1e-26;

std::vector<std::complex<double>> kick_row(const qkr::BesselBand& band) {
  std::vector<std::complex<double>> c(static_cast<std::size_t>(band.size()));
  for (int s = -band.order_max; s <= band.order_max; ++s) {
    c[s + band.order_max] = qkr::inverse_quarter_turn(s) * band[s];
  }
  return c;
}

std::vector<std::complex<double>> random_amplitudes(int n) {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> v(static_cast<std::size_t>(2 * n + 1));
  for (auto& a : v) a = {g(gen), g(gen)};
  return v;
}

void BM_BandedApplyRef(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto band = qkr::bessel_band(kKappa, kTail);
  const auto coeffs = kick_row(band);
  const auto in = random_amplitudes(n);
  std::vector<std::complex<double>> out(in.size());
  for (auto _ : state) {
    qkr::kernels::ref::banded_apply(coeffs, band.order_max, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
}

void BM_BandedApplyOmp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto band = qkr::bessel_band(kKappa, kTail);
  const auto coeffs = kick_row(band);
  const auto in = random_amplitudes(n);
  std::vector<std::complex<double>> out(in.size());
  for (auto _ : state) {
    qkr::kernels::banded_apply(coeffs, band.order_max, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
}

void BM_BandConvolveRef(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = qkr::transition_band(kKappa, kTail);
  std::vector<double> in(static_cast<std::size_t>(2 * n + 1), 1.0 / (2 * n + 1));
  std::vector<double> out(in.size());
  for (auto _ : state) {
    qkr::kernels::ref::band_convolve(t.band_values, t.reach, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
}

void BM_BandConvolveOmp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = qkr::transition_band(kKappa, kTail);
  std::vector<double> in(static_cast<std::size_t>(2 * n + 1), 1.0 / (2 * n + 1));
  std::vector<double> out(in.size());
  for (auto _ : state) {
    qkr::kernels::band_convolve(t.band_values, t.reach, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
}

void BM_StepBanded(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<qkr::BesselBand> bands{qkr::bessel_band(kKappa, kTail)};
  qkr::BandedPropagator prop(bands);
  const qkr::kernels::ScopedFlushDenormals ftz;
  qkr::QuantumState psi = qkr::initial_state(0, n);
  for (auto _ : state) {
    prop.advance(psi, qkr::FloquetStep(kKappa, 1.0));
    benchmark::DoNotOptimize(psi.amplitudes.data());
  }
}

void BM_StepSpectral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  qkr::SpectralPropagator prop(n, {kKappa});
  const qkr::kernels::ScopedFlushDenormals ftz;
  qkr::QuantumState psi = qkr::initial_state(0, n);
  for (auto _ : state) {
    prop.advance(psi, qkr::FloquetStep(kKappa, 1.0));
    benchmark::DoNotOptimize(psi.amplitudes.data());
  }
}

}  // namespace

BENCHMARK(BM_BandedApplyRef)->Arg(1024)->Arg(2048)->Arg(4578);
BENCHMARK(BM_BandedApplyOmp)->Arg(1024)->Arg(2048)->Arg(4578);
BENCHMARK(BM_BandConvolveRef)->Arg(1024)->Arg(2048)->Arg(4578);
BENCHMARK(BM_BandConvolveOmp)->Arg(1024)->Arg(2048)->Arg(4578);
BENCHMARK(BM_StepBanded)->Arg(2048)->Arg(4578);
BENCHMARK(BM_StepSpectral)->Arg(2048)->Arg(4578);

BENCHMARK_MAIN();
