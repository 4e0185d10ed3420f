#include "qkr/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkr/error.hpp"
#include "qkr/rng.hpp"

namespace qkr {

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::periodic: return "periodic";
    case ScheduleKind::random: return "random";
    case ScheduleKind::quasi_periodic: return "quasiperiodic";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "periodic") return ScheduleKind::periodic;
  if (name == "random") return ScheduleKind::random;
  if (name == "quasiperiodic" || name == "quasi_periodic" || name == "qdkr") {
    return ScheduleKind::quasi_periodic;
  }
  throw DomainError("unknown schedule kind '" + name + "'");
}

KickSchedule periodic_schedule(double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("periodic_schedule: period must be finite and > 0");
  }
  KickSchedule s;
  s.kind_ = ScheduleKind::periodic;
  s.period_ = period;
  return s;
}

KickSchedule random_schedule(double period, double half_width_fraction, std::uint64_t seed) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("random_schedule: period must be finite and > 0");
  }
  if (!(half_width_fraction >= 0.0 && half_width_fraction < 1.0)) {
    throw DomainError("random_schedule: half_width_fraction must lie in [0, 1)");
  }
  KickSchedule s;
  s.kind_ = ScheduleKind::random;
  s.period_ = period;
  s.jitter_ = half_width_fraction;
  s.seed_ = seed;
  return s;
}

KickSchedule quasiperiodic_schedule(double period1, double ratio, std::int64_t horizon) {
  if (!(period1 > 0.0) || !std::isfinite(period1)) {
    throw DomainError("quasiperiodic_schedule: period1 must be finite and > 0");
  }
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw DomainError("quasiperiodic_schedule: ratio must be finite and > 0");
  }
  if (horizon < 1) throw DomainError("quasiperiodic_schedule: horizon must be >= 1");
  KickSchedule s;
  s.kind_ = ScheduleKind::quasi_periodic;
  s.period_ = period1;
  s.ratio_ = ratio;
  s.horizon_ = horizon;
  return s;
}

ScheduleCursor KickSchedule::cursor(std::uint64_t stream) const {
  return ScheduleCursor(*this, stream);
}

std::vector<Kick> KickSchedule::take(std::int64_t count, std::uint64_t stream) const {
  ScheduleCursor c = cursor(stream);
  std::vector<Kick> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(c.next());
  return out;
}

ScheduleCursor::ScheduleCursor(const KickSchedule& schedule, std::uint64_t stream)
    : schedule_(schedule), stream_(stream) {}

Kick ScheduleCursor::next() {
  if (count_ >= schedule_.horizon()) {
    throw std::out_of_range("kick schedule exhausted at horizon " +
                            std::to_string(schedule_.horizon()));
  }
  const double period = schedule_.base_period();
  Kick kick;
  switch (schedule_.kind()) {
    case ScheduleKind::periodic:
      kick.interval = period;
      break;
    case ScheduleKind::random: {
      const CounterRng rng(schedule_.seed(), stream_);
      const double u = rng.uniform(static_cast<std::uint64_t>(count_));
      kick.interval = period * (1.0 + schedule_.jitter() * (2.0 * u - 1.0));
      break;
    }
    case ScheduleKind::quasi_periodic: {
      // Times are formed as products, never running sums, so the sequence
      // is reproducible bit for bit.
      const double t_first = static_cast<double>(next_first_) * period;
      const double t_second =
          static_cast<double>(next_second_) * period * schedule_.ratio();
      const double tol = 1e-12 * std::max(1.0, std::max(t_first, t_second));
      double t = 0.0;
      if (std::abs(t_first - t_second) <= tol) {
        t = t_first;
        kick.train = 0;
        ++next_first_;
        ++next_second_;
      } else if (t_first < t_second) {
        t = t_first;
        kick.train = 0;
        ++next_first_;
      } else {
        t = t_second;
        kick.train = 1;
        ++next_second_;
      }
      kick.interval = t - last_time_;
      last_time_ = t;
      break;
    }
  }
  ++count_;
  return kick;
}

}  // namespace qkr
