#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkr/diagnostics.hpp"
#include "qkr/schedule.hpp"
#include "qkr/state.hpp"

namespace qkr {

enum class PropagatorKind { banded, spectral };
std::string to_string(PropagatorKind kind);

/// Models in CSV order.
enum class Model { diffusion, markov, quantum };
std::string to_string(Model model);

struct ModelFlags {
  bool quantum = true;
  bool markov = true;
  bool diffusion = true;
};

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::periodic;
  double jitter = 0.5;          // random: half width as a fraction of tau
  double ratio = kGoldenRatio;  // quasi-periodic: second period / first
};

struct RunConfig {
  double kappa = 0.0;
  std::optional<double> kappa2;  // second pulse train; defaults to kappa
  double tau = 1.0;
  ScheduleSpec schedule;
  int kicks = 1000;
  int basis_halfwidth = 0;
  std::vector<int> initial_set;
  ModelFlags models;
  std::uint64_t seed = 1;
  PropagatorKind propagator = PropagatorKind::banded;
  double tail_tolerance = 1e-26;
  double edge_tolerance = 1e-12;
  bool track_residual = false;
  int threads = 0;  // 0: OpenMP default
  std::string output_prefix = "qkr";
  bool plots = true;

  double second_kappa() const { return kappa2.value_or(kappa); }
  /// Stable "key = value" rendering of every field, used for hashing.
  std::string canonical() const;
  /// FNV-1a over canonical().
  std::uint64_t hash() const;
};

/// max(1024, ceil(8 kappa + 20 L)) with L = kappa^2 / 2 as the guess for the
/// localisation length in momentum states.
int default_basis_halfwidth(double kappa);

/// Throws ConfigError naming the first invalid field.
void validate(const RunConfig& config);

KickSchedule make_schedule(const RunConfig& config);

/// {-1, +1, -2, +2, ..., -c, +c}: the 2c momentum eigenstates of the c
/// lowest nonzero (doubly degenerate) levels E_k = k^2.
std::vector<int> build_initial_set(int lowest_count, int basis_halfwidth);

struct ModelSeries {
  Model model = Model::quantum;
  double initial_energy = 0.0;
  std::vector<DiagnosticsRecord> records;  // kicks 1..n, trajectory means
  Distribution final_distribution;         // trajectory mean after the last kick
};

struct EnsembleChecks {
  double max_closure_error = 0.0;        // |dE - (markov + interference)|, any kick
  double max_markov_entropy_drop = 0.0;  // max over kicks of S(P_n) - S(P_{n+1})
  double max_edge_occupation = 0.0;
  std::optional<double> max_telescoping_error;  // |P_q - P_m - R|, when tracked
};

struct EnsembleResult {
  RunConfig config;
  int trajectories = 0;
  std::vector<ModelSeries> models;  // ordered by Model
  std::optional<LocalizationFit> fit;
  std::optional<int> saturation_kick;
  int fit_center = 0;
  EnsembleChecks checks;
  std::uint64_t config_hash = 0;
  std::string version;

  const ModelSeries* find(Model model) const;
};

/// Propagates every initial condition, co-runs the enabled reference models
/// on the same interval sequence and reduces per-kick means in trajectory
/// order, so the result does not depend on the number of threads.
///
/// Throws ConfigError for an invalid config and EdgeGuardError when any
/// trajectory puts more than edge_tolerance probability in the outer band of
/// the basis.
EnsembleResult run_ensemble(const RunConfig& config);

}  // namespace qkr
