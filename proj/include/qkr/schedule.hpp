#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace qkr {

enum class ScheduleKind { periodic, random, quasi_periodic };

std::string to_string(ScheduleKind kind);
/// Accepts "periodic", "random", "quasiperiodic" / "quasi_periodic" / "qdkr".
ScheduleKind parse_schedule_kind(const std::string& name);

/// One interval of free rotation, ended by a kick from pulse train 0 or 1.
struct Kick {
  double interval = 0.0;
  int train = 0;
};

class ScheduleCursor;

/// Interval sequence dt_n (in units of the scaled time tau). Immutable; each
/// trajectory iterates it through its own cursor.
class KickSchedule {
 public:
  ScheduleKind kind() const { return kind_; }
  double base_period() const { return period_; }
  double jitter() const { return jitter_; }
  double ratio() const { return ratio_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t horizon() const { return horizon_; }

  /// Random schedules derive an independent stream per trajectory index.
  ScheduleCursor cursor(std::uint64_t stream = 0) const;
  std::vector<Kick> take(std::int64_t count, std::uint64_t stream = 0) const;

  friend KickSchedule periodic_schedule(double period);
  friend KickSchedule random_schedule(double period, double half_width_fraction,
                                      std::uint64_t seed);
  friend KickSchedule quasiperiodic_schedule(double period1, double ratio,
                                             std::int64_t horizon);

 private:
  ScheduleKind kind_ = ScheduleKind::periodic;
  double period_ = 1.0;
  double jitter_ = 0.0;
  double ratio_ = 0.0;
  std::uint64_t seed_ = 0;
  std::int64_t horizon_ = std::numeric_limits<std::int64_t>::max();
};

class ScheduleCursor {
 public:
  /// Throws std::out_of_range past the schedule horizon.
  Kick next();
  std::int64_t position() const { return count_; }

 private:
  friend class KickSchedule;
  ScheduleCursor(const KickSchedule& schedule, std::uint64_t stream);

  KickSchedule schedule_;
  std::uint64_t stream_;
  std::int64_t count_ = 0;
  // quasi-periodic state: index of the next pending kick in each train and
  // the time of the last emitted kick.
  std::int64_t next_first_ = 1;
  std::int64_t next_second_ = 1;
  double last_time_ = 0.0;
};

KickSchedule periodic_schedule(double period);

/// dt_n uniform on [T(1 - f), T(1 + f)].
KickSchedule random_schedule(double period, double half_width_fraction, std::uint64_t seed);

/// Kick times {n T1} and {m T1 ratio} merged in ascending order; coincident
/// kicks (within 1e-12 relative) count once and belong to train 0.
KickSchedule quasiperiodic_schedule(double period1, double ratio, std::int64_t horizon);

inline constexpr double kGoldenRatio = 1.6180339887498948482;

}  // namespace qkr
