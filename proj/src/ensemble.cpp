#include "qkr/ensemble.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>

#include "qkr/bessel.hpp"
#include "qkr/error.hpp"
#include "qkr/kernels.hpp"
#include "qkr/markov.hpp"
#include "qkr/propagate.hpp"

namespace qkr {

EdgeGuardError::EdgeGuardError(int trajectory, int kick, double edge_occupation)
    : std::runtime_error("edge guard: trajectory " + std::to_string(trajectory) +
                         " put probability " + std::to_string(edge_occupation) +
                         " at the basis edge on kick " + std::to_string(kick)),
      trajectory_(trajectory),
      kick_(kick),
      edge_occupation_(edge_occupation) {}

std::string to_string(PropagatorKind kind) {
  return kind == PropagatorKind::banded ? "banded" : "spectral";
}

std::string to_string(Model model) {
  switch (model) {
    case Model::diffusion: return "diffusion";
    case Model::markov: return "markov";
    case Model::quantum: return "quantum";
  }
  return "unknown";
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "basis_halfwidth = " << basis_halfwidth << '\n'
     << "edge_tolerance = " << edge_tolerance << '\n'
     << "initial_set =";
  for (int k : initial_set) os << ' ' << k;
  os << '\n'
     << "jitter = " << schedule.jitter << '\n'
     << "kappa = " << kappa << '\n'
     << "kappa2 = " << second_kappa() << '\n'
     << "kicks = " << kicks << '\n'
     << "models =" << (models.diffusion ? " diffusion" : "") << (models.markov ? " markov" : "")
     << (models.quantum ? " quantum" : "") << '\n'
     << "propagator = " << to_string(propagator) << '\n'
     << "ratio = " << schedule.ratio << '\n'
     << "schedule = " << to_string(schedule.kind) << '\n'
     << "seed = " << seed << '\n'
     << "tail_tolerance = " << tail_tolerance << '\n'
     << "tau = " << tau << '\n'
     << "track_residual = " << (track_residual ? "true" : "false") << '\n';
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int default_basis_halfwidth(double kappa) {
  const double localization_guess = 0.5 * kappa * kappa;
  return std::max(1024, static_cast<int>(std::ceil(8.0 * kappa + 20.0 * localization_guess)));
}

void validate(const RunConfig& c) {
  if (!(c.kappa >= 0.0) || !std::isfinite(c.kappa)) throw ConfigError("kappa", "must be >= 0");
  if (!(c.second_kappa() >= 0.0) || !std::isfinite(c.second_kappa())) {
    throw ConfigError("kappa2", "must be >= 0");
  }
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) throw ConfigError("tau", "must be > 0");
  if (c.kicks < 1) throw ConfigError("kicks", "must be >= 1");
  if (c.basis_halfwidth < 1) throw ConfigError("basis", "must be >= 1");
  if (c.initial_set.empty()) throw ConfigError("trajectories", "initial set is empty");
  for (int k : c.initial_set) {
    if (std::abs(k) > c.basis_halfwidth) {
      throw ConfigError("trajectories", "initial state " + std::to_string(k) +
                                            " lies outside the basis");
    }
  }
  if (!(c.schedule.jitter >= 0.0 && c.schedule.jitter < 1.0)) {
    throw ConfigError("jitter", "must lie in [0, 1)");
  }
  if (!(c.schedule.ratio > 0.0) || !std::isfinite(c.schedule.ratio)) {
    throw ConfigError("ratio", "must be > 0");
  }
  if (!(c.tail_tolerance > 0.0 && c.tail_tolerance < 1.0)) {
    throw ConfigError("tail_tolerance", "must lie in (0, 1)");
  }
  if (!(c.edge_tolerance > 0.0 && c.edge_tolerance < 1.0)) {
    throw ConfigError("edge_tolerance", "must lie in (0, 1)");
  }
  if (!c.models.quantum && !c.models.markov && !c.models.diffusion) {
    throw ConfigError("models", "at least one model must be enabled");
  }
  if (c.track_residual && !(c.models.quantum && c.models.markov)) {
    throw ConfigError("track_residual", "needs both the quantum and markov models");
  }
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
}

KickSchedule make_schedule(const RunConfig& c) {
  switch (c.schedule.kind) {
    case ScheduleKind::periodic: return periodic_schedule(c.tau);
    case ScheduleKind::random: return random_schedule(c.tau, c.schedule.jitter, c.seed);
    case ScheduleKind::quasi_periodic:
      return quasiperiodic_schedule(c.tau, c.schedule.ratio, c.kicks);
  }
  throw ConfigError("schedule", "unknown kind");
}

std::vector<int> build_initial_set(int lowest_count, int basis_halfwidth) {
  if (lowest_count < 1) throw DomainError("build_initial_set: count must be >= 1");
  if (lowest_count > basis_halfwidth) {
    throw DomainError("build_initial_set: count " + std::to_string(lowest_count) +
                      " exceeds the basis half-width " + std::to_string(basis_halfwidth));
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(2 * lowest_count));
  for (int c = 1; c <= lowest_count; ++c) {
    out.push_back(-c);
    out.push_back(c);
  }
  return out;
}

const ModelSeries* EnsembleResult::find(Model model) const {
  for (const auto& m : models) {
    if (m.model == model) return &m;
  }
  return nullptr;
}

namespace {

struct SharedOperators {
  std::vector<double> kappas;  // by pulse train
  std::vector<BesselBand> bands;
  std::vector<TransitionMatrix> transitions;
};

struct TrajectoryOutput {
  std::vector<ModelSeries> models;
  EnsembleChecks checks;
};

double edge_occupation(const Distribution& p, int reach) {
  const int size = static_cast<int>(p.probabilities.size());
  const int width = std::min(std::max(reach, 1), size);
  double sum = 0.0;
  for (int i = 0; i < width; ++i) {
    sum += p.probabilities[i];
    if (size - 1 - i >= width) sum += p.probabilities[size - 1 - i];
  }
  return sum;
}

DiagnosticsRecord observe(int kick, const Distribution& p, int k0, double markov_cum,
                          double interference_cum) {
  DiagnosticsRecord r;
  r.kick_index = kick;
  r.energy = energy(p);
  r.markov_energy_cum = markov_cum;
  r.interference_energy_cum = interference_cum;
  r.entropy = entropy(p);
  r.participation_number = participation_number(p);
  r.second_moment = second_moment(p, k0);
  return r;
}

std::unique_ptr<Propagator> make_propagator(const RunConfig& c, const SharedOperators& ops) {
  if (c.propagator == PropagatorKind::spectral) {
    return std::make_unique<SpectralPropagator>(c.basis_halfwidth, ops.kappas);
  }
  return std::make_unique<BandedPropagator>(ops.bands);
}

TrajectoryOutput run_trajectory(const RunConfig& c, const SharedOperators& ops,
                                const KickSchedule& schedule, int index) {
  const int k0 = c.initial_set[index];
  const int n = c.basis_halfwidth;
  TrajectoryOutput out;
  ScheduleCursor cursor = schedule.cursor(static_cast<std::uint64_t>(index));

  QuantumState state = initial_state(k0, n);
  Distribution p_quantum = occupation(state);
  Distribution p_markov = p_quantum;
  Distribution p_prev, p_markov_next, markov_of_prev;
  Distribution residual;  // R_{n+1} = T R_n + beta_n
  if (c.track_residual) residual.probabilities.assign(p_quantum.probabilities.size(), 0.0);
  residual.halfwidth = n;
  InterferenceVector beta;
  beta.halfwidth = n;

  std::unique_ptr<Propagator> propagator;
  if (c.models.quantum) propagator = make_propagator(c, ops);

  ModelSeries quantum{Model::quantum, energy(p_quantum), {}, {}};
  ModelSeries markov{Model::markov, energy(p_markov), {}, {}};
  ModelSeries diffusion{Model::diffusion, static_cast<double>(k0) * k0, {}, {}};
  quantum.records.reserve(static_cast<std::size_t>(c.kicks));
  markov.records.reserve(static_cast<std::size_t>(c.kicks));
  diffusion.records.reserve(static_cast<std::size_t>(c.kicks));

  double q_markov_cum = 0.0, q_interference_cum = 0.0, m_markov_cum = 0.0;
  double variance = 0.0;
  double markov_entropy = entropy(p_markov);
  Distribution p_diffusion;
  const InterferenceVector zero_beta{std::vector<double>(p_quantum.probabilities.size(), 0.0), n};

  for (int kick = 1; kick <= c.kicks; ++kick) {
    const Kick next = cursor.next();
    const int train = next.train;
    const TransitionMatrix& t = ops.transitions[train];
    const std::vector<double> w = rate_band(t, next.interval);

    if (c.models.quantum) {
      p_prev = p_quantum;
      propagator->advance(state, FloquetStep(ops.kappas[train], next.interval));
      p_quantum = occupation(state);
      const double edge = edge_occupation(p_quantum, ops.bands[train].order_max);
      out.checks.max_edge_occupation = std::max(out.checks.max_edge_occupation, edge);
      if (!(edge < c.edge_tolerance)) throw EdgeGuardError(index, kick, edge);

      markov_step_into(p_prev, t, markov_of_prev);
      beta.beta.resize(p_quantum.probabilities.size());
      for (std::size_t i = 0; i < beta.beta.size(); ++i) {
        beta.beta[i] = p_quantum.probabilities[i] - markov_of_prev.probabilities[i];
      }
      const EnergySplit split = energy_decomposition(p_prev, beta, w, next.interval);
      q_markov_cum += split.markov_increment;
      q_interference_cum += split.interference_increment;
      const DiagnosticsRecord rec =
          observe(kick, p_quantum, k0, q_markov_cum, q_interference_cum);
      const double previous_energy =
          quantum.records.empty() ? quantum.initial_energy : quantum.records.back().energy;
      const double closure = std::abs(rec.energy - previous_energy -
                                      (split.markov_increment + split.interference_increment));
      out.checks.max_closure_error = std::max(out.checks.max_closure_error, closure);
      quantum.records.push_back(rec);

      if (c.track_residual) {
        Distribution propagated;
        markov_step_into(residual, t, propagated);
        for (std::size_t i = 0; i < beta.beta.size(); ++i) {
          propagated.probabilities[i] += beta.beta[i];
        }
        residual = std::move(propagated);
      }
    }

    if (c.models.markov) {
      const double previous_energy =
          markov.records.empty() ? markov.initial_energy : markov.records.back().energy;
      const EnergySplit split = energy_decomposition(p_markov, zero_beta, w, next.interval);
      markov_step_into(p_markov, t, p_markov_next);
      std::swap(p_markov, p_markov_next);
      m_markov_cum += split.markov_increment;
      DiagnosticsRecord rec = observe(kick, p_markov, k0, m_markov_cum, 0.0);
      out.checks.max_markov_entropy_drop =
          std::max(out.checks.max_markov_entropy_drop, markov_entropy - rec.entropy);
      out.checks.max_closure_error = std::max(
          out.checks.max_closure_error,
          std::abs(rec.energy - previous_energy - split.markov_increment));
      markov_entropy = rec.entropy;
      markov.records.push_back(rec);
    }

    if (c.models.quantum && c.models.markov && c.track_residual) {
      double worst = 0.0;
      for (std::size_t i = 0; i < p_quantum.probabilities.size(); ++i) {
        worst = std::max(worst, std::abs(p_quantum.probabilities[i] -
                                         p_markov.probabilities[i] -
                                         residual.probabilities[i]));
      }
      out.checks.max_telescoping_error =
          std::max(out.checks.max_telescoping_error.value_or(0.0), worst);
    }

    if (c.models.diffusion) {
      variance += diffusion_coefficient(t, next.interval) * next.interval;
      p_diffusion = discrete_gaussian(variance, k0, n);
      const double e = energy(p_diffusion);
      diffusion.records.push_back(observe(kick, p_diffusion, k0, e - diffusion.initial_energy, 0.0));
    }
  }

  if (c.models.diffusion) {
    diffusion.final_distribution = p_diffusion;
    out.models.push_back(std::move(diffusion));
  }
  if (c.models.markov) {
    markov.final_distribution = p_markov;
    out.models.push_back(std::move(markov));
  }
  if (c.models.quantum) {
    quantum.final_distribution = p_quantum;
    out.models.push_back(std::move(quantum));
  }
  return out;
}

void accumulate(DiagnosticsRecord& into, const DiagnosticsRecord& r) {
  into.kick_index = r.kick_index;
  into.energy += r.energy;
  into.markov_energy_cum += r.markov_energy_cum;
  into.interference_energy_cum += r.interference_energy_cum;
  into.entropy += r.entropy;
  into.participation_number += r.participation_number;
  into.second_moment += r.second_moment;
}

void scale(DiagnosticsRecord& r, double f) {
  r.energy *= f;
  r.markov_energy_cum *= f;
  r.interference_energy_cum *= f;
  r.entropy *= f;
  r.participation_number *= f;
  r.second_moment *= f;
}

}  // namespace

EnsembleResult run_ensemble(const RunConfig& config) {
  validate(config);
  SharedOperators ops;
  ops.kappas = {config.kappa, config.second_kappa()};
  for (double kappa : ops.kappas) {
    ops.bands.push_back(bessel_band(kappa, config.tail_tolerance));
    ops.transitions.push_back(transition_band(kappa, config.tail_tolerance));
  }
  const KickSchedule schedule = make_schedule(config);

  const int count = static_cast<int>(config.initial_set.size());
  std::vector<TrajectoryOutput> outputs(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < count; ++i) {
    const kernels::ScopedFlushDenormals ftz;
    try {
      outputs[i] = run_trajectory(config, ops, schedule, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EnsembleResult result;
  result.config = config;
  result.trajectories = count;
  result.config_hash = config.hash();
  result.version = QKR_VERSION;

  const double inv = 1.0 / count;
  const std::size_t basis_size = static_cast<std::size_t>(2 * config.basis_halfwidth + 1);
  for (std::size_t m = 0; m < outputs.front().models.size(); ++m) {
    ModelSeries mean;
    mean.model = outputs.front().models[m].model;
    mean.records.assign(static_cast<std::size_t>(config.kicks), DiagnosticsRecord{});
    mean.final_distribution.halfwidth = config.basis_halfwidth;
    mean.final_distribution.probabilities.assign(basis_size, 0.0);
    for (const auto& traj : outputs) {
      const ModelSeries& s = traj.models[m];
      mean.initial_energy += s.initial_energy;
      for (std::size_t k = 0; k < s.records.size(); ++k) accumulate(mean.records[k], s.records[k]);
      for (std::size_t k = 0; k < basis_size; ++k) {
        mean.final_distribution.probabilities[k] += s.final_distribution.probabilities[k];
      }
    }
    mean.initial_energy *= inv;
    for (auto& r : mean.records) scale(r, inv);
    for (auto& v : mean.final_distribution.probabilities) v *= inv;
    result.models.push_back(std::move(mean));
  }

  for (const auto& traj : outputs) {
    auto& c = result.checks;
    c.max_closure_error = std::max(c.max_closure_error, traj.checks.max_closure_error);
    c.max_markov_entropy_drop =
        std::max(c.max_markov_entropy_drop, traj.checks.max_markov_entropy_drop);
    c.max_edge_occupation = std::max(c.max_edge_occupation, traj.checks.max_edge_occupation);
    if (traj.checks.max_telescoping_error) {
      c.max_telescoping_error =
          std::max(c.max_telescoping_error.value_or(0.0), *traj.checks.max_telescoping_error);
    }
  }

  if (const ModelSeries* q = result.find(Model::quantum)) {
    double center = 0.0;
    for (int k : config.initial_set) center += k;
    result.fit_center = static_cast<int>(std::lround(center * inv));
    try {
      result.fit = fit_localization(q->final_distribution, result.fit_center);
    } catch (const InsufficientDataError&) {
    } catch (const DomainError&) {
    }
    std::vector<double> s;
    s.reserve(q->records.size() + 1);
    s.push_back(0.0);  // eigenstate start
    for (const auto& r : q->records) s.push_back(r.entropy);
    result.saturation_kick = saturation_kick(s);
  }
  return result;
}

}  // namespace qkr
