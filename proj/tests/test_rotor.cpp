#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qkr/bessel.hpp"
#include "qkr/error.hpp"
#include "qkr/kernels.hpp"
#include "qkr/propagate.hpp"
#include "qkr/state.hpp"

using qkr::Complex;

namespace {

qkr::QuantumState random_state(int n, int active, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  qkr::QuantumState s = qkr::initial_state(0, n);
  double norm = 0.0;
  for (int k = -active; k <= active; ++k) {
    const Complex a(normal(gen), normal(gen));
    s.amplitudes[s.basis().index(k)] = a;
    norm += std::norm(a);
  }
  for (auto& a : s.amplitudes) a /= std::sqrt(norm);
  return s;
}

double max_diff(const qkr::QuantumState& a, const qkr::QuantumState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    m = std::max(m, std::abs(a.amplitudes[i] - b.amplitudes[i]));
  }
  return m;
}

// Dense reference: a'_k = sum_l i^{-(l-k)} J_{l-k} e^{-i tau l^2/2} a_l.
qkr::QuantumState dense_step(const qkr::QuantumState& in, double kappa, double tau) {
  qkr::QuantumState out = in;
  const int n = in.halfwidth;
  for (int k = -n; k <= n; ++k) {
    Complex acc = 0.0;
    for (int l = -n; l <= n; ++l) {
      const int s = l - k;
      const double j = s >= 0 ? std::cyl_bessel_j(static_cast<double>(s), kappa)
                              : ((-s) % 2 ? -1.0 : 1.0) *
                                    std::cyl_bessel_j(static_cast<double>(-s), kappa);
      const Complex quarter = std::polar(1.0, -M_PI / 2.0 * s);
      const Complex free = std::polar(1.0, -tau * l * l / 2.0);
      acc += quarter * j * free * in.amplitude(l);
    }
    out.amplitudes[out.basis().index(k)] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("initial_state examples") {
  const auto s = qkr::initial_state(0, 1024);
  CHECK(s.amplitudes.size() == 2049u);
  CHECK(s.amplitude(0) == Complex(1.0, 0.0));
  CHECK(s.norm_squared() == 1.0);
  double off = 0.0;
  for (int k = -1024; k <= 1024; ++k) {
    if (k != 0) off += std::norm(s.amplitude(k));
  }
  CHECK(off == 0.0);

  const auto s3 = qkr::initial_state(3, 8);
  CHECK(s3.amplitude(3) == Complex(1.0, 0.0));
  CHECK(s3.center == 3);
  CHECK_THROWS_AS(qkr::initial_state(9, 8), qkr::DomainError);
  CHECK_THROWS_AS(qkr::initial_state(-9, 8), qkr::DomainError);
}

TEST_CASE("FloquetStep validates its parameters") {
  CHECK_THROWS_AS(qkr::FloquetStep(-1.0, 1.0), qkr::DomainError);
  CHECK_THROWS_AS(qkr::FloquetStep(1.0, 0.0), qkr::DomainError);
  CHECK_NOTHROW(qkr::FloquetStep(0.0, 1.0));
}

TEST_CASE("quarter turn phases are exact") {
  CHECK(qkr::inverse_quarter_turn(0) == Complex(1, 0));
  CHECK(qkr::inverse_quarter_turn(1) == Complex(0, -1));
  CHECK(qkr::inverse_quarter_turn(2) == Complex(-1, 0));
  CHECK(qkr::inverse_quarter_turn(3) == Complex(0, 1));
  CHECK(qkr::inverse_quarter_turn(-1) == Complex(0, 1));
  CHECK(qkr::inverse_quarter_turn(-6) == Complex(-1, 0));
  CHECK(qkr::inverse_quarter_turn(401) == Complex(0, -1));
}

TEST_CASE("free phase table matches direct evaluation") {
  qkr::FreePhaseTable table;
  const auto& p = table.get(0.7, 50);
  REQUIRE(p.size() == 101u);
  for (int k = -50; k <= 50; ++k) {
    CHECK(std::abs(p[static_cast<std::size_t>(k + 50)] - qkr::free_phase(0.7, k)) == 0.0);
    CHECK(std::abs(qkr::free_phase(0.7, k) - std::polar(1.0, -0.35 * k * k)) < 1e-12);
  }
  const auto& q = table.get(1.3, 20);
  CHECK(q.size() == 41u);
  CHECK(std::abs(q[25] - qkr::free_phase(1.3, 5)) == 0.0);
}

TEST_CASE("occupation examples") {
  const auto p = qkr::occupation(qkr::initial_state(2, 5));
  CHECK(p.at(2) == 1.0);
  CHECK(p.total() == 1.0);
  qkr::QuantumState s = qkr::initial_state(0, 4);
  s.amplitudes[s.basis().index(0)] = 1.0 / std::sqrt(2.0);
  s.amplitudes[s.basis().index(3)] = Complex(0.0, 1.0 / std::sqrt(2.0));
  const auto q = qkr::occupation(s);
  CHECK(q.at(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.at(3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(q.total() - 1.0) < 1e-10);
  CHECK(q.at(99) == 0.0);
}

TEST_CASE("banded step with zero kick is pure free rotation") {
  std::mt19937_64 gen(11);
  const auto s = random_state(40, 30, gen);
  const auto band = qkr::bessel_band(0.0, 1e-16);
  const auto out = qkr::apply_step_banded(s, qkr::FloquetStep(0.0, 0.9), band);
  for (int k = -40; k <= 40; ++k) {
    CHECK(std::abs(out.amplitude(k) - qkr::free_phase(0.9, k) * s.amplitude(k)) < 1e-15);
    CHECK(std::norm(out.amplitude(k)) == doctest::Approx(std::norm(s.amplitude(k))).epsilon(1e-14));
  }
}

TEST_CASE("one kick from the ground state gives squared Bessel occupations") {
  const auto band = qkr::bessel_band(21.0, 1e-26);
  const auto s = qkr::initial_state(0, 256);
  const auto out = qkr::apply_step_banded(s, qkr::FloquetStep(21.0, 1.0), band);
  const auto p = qkr::occupation(out);
  for (int k = -60; k <= 60; ++k) {
    const double j = std::cyl_bessel_j(static_cast<double>(std::abs(k)), 21.0);
    CHECK(std::abs(p.at(k) - j * j) < 1e-13);
  }
  CHECK(std::abs(out.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("banded step matches a dense matrix built from the closed form") {
  std::mt19937_64 gen(3);
  const auto s = random_state(24, 24, gen);
  const double kappa = 2.5, tau = 1.3;
  const auto band = qkr::bessel_band(kappa, 1e-26);
  const auto out = qkr::apply_step_banded(s, qkr::FloquetStep(kappa, tau), band);
  CHECK(max_diff(out, dense_step(s, kappa, tau)) < 1e-12);
}

TEST_CASE("band argument mismatch is a consistency error") {
  const auto band = qkr::bessel_band(5.0, 1e-12);
  const auto s = qkr::initial_state(0, 64);
  CHECK_THROWS_AS(qkr::apply_step_banded(s, qkr::FloquetStep(5.5, 1.0), band),
                  qkr::ConsistencyError);
}

TEST_CASE("spectral grid is the smallest power of two covering twice the basis") {
  CHECK(qkr::spectral_grid_size(8) == 64);
  CHECK(qkr::spectral_grid_size(15) == 64);
  CHECK(qkr::spectral_grid_size(16) == 128);
  CHECK(qkr::spectral_grid_size(2048) == 16384);
  CHECK(qkr::spectral_grid_size(4578) == 32768);
}

TEST_CASE("spectral step with zero kick is free rotation") {
  std::mt19937_64 gen(5);
  const auto s = random_state(100, 80, gen);
  const auto out = qkr::apply_step_spectral(s, qkr::FloquetStep(0.0, 1.0));
  for (int k = -100; k <= 100; ++k) {
    CHECK(std::abs(out.amplitude(k) - qkr::free_phase(1.0, k) * s.amplitude(k)) < 1e-14);
  }
}

TEST_CASE("spectral and banded agree from the ground state") {
  const auto band = qkr::bessel_band(21.0, 1e-26);
  const auto s = qkr::initial_state(0, 128);
  const qkr::FloquetStep step(21.0, 1.0);
  const auto a = qkr::apply_step_banded(s, step, band);
  const auto b = qkr::apply_step_spectral(s, step);
  CHECK(max_diff(a, b) < 1e-8);
}

TEST_CASE("path equivalence over random states") {
  for (double kappa : {5.0, 21.0}) {
    const int n = 512;
    const auto band = qkr::bessel_band(kappa, 1e-26);
    qkr::BandedPropagator banded({band});
    qkr::SpectralPropagator spectral(n, {kappa});
    std::mt19937_64 gen(17);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      auto a = random_state(n, 100, gen);
      auto b = a;
      const qkr::FloquetStep step(kappa, 1.0);
      for (int kick = 0; kick < 3; ++kick) {
        banded.advance(a, step);
        spectral.advance(b, step);
      }
      worst = std::max(worst, max_diff(a, b));
    }
    CAPTURE(kappa);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("unitarity over many steps on both paths") {
  const int n = 1024;
  const double kappa = 5.0;
  const auto band = qkr::bessel_band(kappa, 1e-26);
  qkr::BandedPropagator banded({band});
  qkr::SpectralPropagator spectral(n, {kappa});
  auto a = qkr::initial_state(0, n);
  auto b = a;
  const qkr::FloquetStep step(kappa, 1.0);
  double drift_a = 0.0, drift_b = 0.0;
  for (int kick = 0; kick < 10000; ++kick) {
    banded.advance(a, step);
    spectral.advance(b, step);
    if (kick % 100 == 99) {
      drift_a = std::max(drift_a, std::abs(std::sqrt(a.norm_squared()) - 1.0));
      drift_b = std::max(drift_b, std::abs(std::sqrt(b.norm_squared()) - 1.0));
    }
  }
  CHECK(drift_a < 1e-10);
  CHECK(drift_b < 1e-10);
}

TEST_CASE("momentum reflection symmetry from the ground state") {
  const int n = 600;
  const auto band = qkr::bessel_band(10.0, 1e-26);
  qkr::BandedPropagator banded({band});
  auto s = qkr::initial_state(0, n);
  for (int kick = 0; kick < 200; ++kick) {
    banded.advance(s, qkr::FloquetStep(10.0, 1.0));
    const auto p = qkr::occupation(s);
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) worst = std::max(worst, std::abs(p.at(k) - p.at(-k)));
    REQUIRE(worst < 1e-10);
  }
}

TEST_CASE("propagators reject states they were not built for") {
  qkr::SpectralPropagator spectral(64, {2.0});
  CHECK(spectral.grid_size() == 512);
  auto s = qkr::initial_state(0, 32);
  CHECK_THROWS_AS(spectral.advance(s, qkr::FloquetStep(2.0, 1.0)), qkr::ConsistencyError);
  auto t = qkr::initial_state(0, 64);
  CHECK_THROWS_AS(spectral.advance(t, qkr::FloquetStep(3.0, 1.0)), qkr::ConsistencyError);
  qkr::BandedPropagator banded({qkr::bessel_band(2.0, 1e-20)});
  CHECK_THROWS_AS(banded.advance(t, qkr::FloquetStep(3.0, 1.0)), qkr::ConsistencyError);
}

TEST_CASE("two pulse strengths are dispatched by kappa") {
  const int n = 200;
  const auto b1 = qkr::bessel_band(3.0, 1e-26);
  const auto b2 = qkr::bessel_band(7.0, 1e-26);
  qkr::BandedPropagator banded({b1, b2});
  qkr::SpectralPropagator spectral(n, {3.0, 7.0});
  auto a = qkr::initial_state(4, n);
  auto b = a;
  for (int kick = 0; kick < 20; ++kick) {
    const qkr::FloquetStep step(kick % 3 ? 3.0 : 7.0, 0.5 + 0.05 * kick);
    banded.advance(a, step);
    spectral.advance(b, step);
  }
  CHECK(max_diff(a, b) < 1e-10);
}

TEST_CASE("parallel kernels match the serial reference") {
  std::mt19937_64 gen(29);
  std::normal_distribution<double> normal;
  for (int size : {1, 7, 100, 1025, 4099}) {
    for (int reach : {0, 3, 40}) {
      std::vector<Complex> coeffs(static_cast<std::size_t>(2 * reach + 1));
      std::vector<double> rcoeffs(coeffs.size());
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double v = normal(gen);
        coeffs[i] = (i % 2) ? Complex(0.0, v) : Complex(v, 0.0);
        if (i % 5 == 3) coeffs[i] = Complex(v, 0.5 * v);
        rcoeffs[i] = std::abs(v);
      }
      std::vector<Complex> in(static_cast<std::size_t>(size));
      std::vector<double> rin(in.size());
      for (std::size_t i = 0; i < in.size(); ++i) {
        in[i] = Complex(normal(gen), normal(gen));
        rin[i] = std::abs(normal(gen));
      }
      std::vector<Complex> ref_out(in.size()), fast_out(in.size());
      qkr::kernels::ref::banded_apply(coeffs, reach, in, ref_out);
      qkr::kernels::banded_apply(coeffs, reach, in, fast_out);
      std::vector<double> rref(in.size()), rfast(in.size());
      qkr::kernels::ref::band_convolve(rcoeffs, reach, rin, rref);
      qkr::kernels::band_convolve(rcoeffs, reach, rin, rfast);
      double worst = 0.0, rworst = 0.0;
      for (std::size_t i = 0; i < in.size(); ++i) {
        worst = std::max(worst, std::abs(ref_out[i] - fast_out[i]));
        rworst = std::max(rworst, std::abs(rref[i] - rfast[i]));
      }
      CAPTURE(size);
      CAPTURE(reach);
      CHECK(worst < 1e-12);
      CHECK(rworst < 1e-12);

      std::vector<Complex> inplace = in;
      qkr::kernels::banded_apply(coeffs, reach, inplace, inplace);
      double alias = 0.0;
      for (std::size_t i = 0; i < in.size(); ++i) {
        alias = std::max(alias, std::abs(inplace[i] - ref_out[i]));
      }
      CHECK(alias < 1e-12);
    }
  }
}

TEST_CASE("reference kernel is a plain truncated convolution") {
  const std::vector<double> coeffs{0.25, 0.5, 0.25};
  const std::vector<double> in{0.0, 1.0, 0.0, 0.0, 2.0};
  std::vector<double> out(in.size());
  qkr::kernels::ref::band_convolve(coeffs, 1, in, out);
  CHECK(out[0] == 0.25);
  CHECK(out[1] == 0.5);
  CHECK(out[2] == 0.25);
  CHECK(out[3] == 0.5);
  CHECK(out[4] == 1.0);
}

TEST_CASE("flush-to-zero guard restores the previous mode") {
  volatile double tiny = 1e-310;
  {
    qkr::kernels::ScopedFlushDenormals guard;
    volatile double r = tiny * 0.5;
    CHECK(r == 0.0);
  }
  volatile double r = tiny * 0.5;
  CHECK(r != 0.0);
}
