#pragma once

#include <string>
#include <string_view>

#include "mspso/error.hpp"

namespace mspso {

/// Position of the run on its global iteration axis. Staged variants share
/// one clock; stages never reset it.
struct IterationClock {
  int t = 0;
  int t_max = 1;

  /// t / t_max, computed once so both endpoints come out exact.
  double fraction() const;
  void validate() const;
};

enum class ScheduleKind { constant, ldiw, tvac };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

struct Coefficients {
  double omega = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  friend bool operator==(const Coefficients &, const Coefficients &) = default;
};

/// Inertia and acceleration coefficients as functions of the clock. The
/// constant fields apply to the constant kind (all three) and to ldiw
/// (c1, c2); the max/min pairs drive the time-varying terms.
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::constant;
  double omega_const = 0.729;
  double c1_const = 1.49445;
  double c2_const = 1.49445;
  double omega_max = 0.9;
  double omega_min = 0.4;
  double c1_max = 2.5;
  double c1_min = 0.5;
  double c2_max = 2.5;
  double c2_min = 0.5;

  static ScheduleSpec constant_defaults();
  static ScheduleSpec ldiw_defaults();
  static ScheduleSpec tvac_defaults();

  /// Throws ConfigError listing every violated constraint.
  void validate() const;

  friend bool operator==(const ScheduleSpec &, const ScheduleSpec &) = default;
};

/// omega_max - (t/t_max)(omega_max - omega_min)
double ldiw_weight(const IterationClock &clock, double omega_max,
                   double omega_min);

struct AccelerationPair {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// c1 falls from c1_max to c1_min, c2 rises from c2_min to c2_max.
AccelerationPair tvac_coeffs(const IterationClock &clock,
                             const ScheduleSpec &spec);

Coefficients coefficients_at(const ScheduleSpec &spec,
                             const IterationClock &clock);

} // namespace mspso
