#include "mspso/schedules.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace mspso {

namespace {

// std::lerp is exact at both ends and monotone in between, which is what the
// endpoint guarantees of the schedules rest on.
double interpolate(double from, double to, double fraction) {
  return std::lerp(from, to, fraction);
}

} // namespace

void IterationClock::validate() const {
  if (t_max <= 0)
    throw ConfigError("iteration clock: t_max must be at least 1");
  if (t < 0 || t > t_max) {
    std::ostringstream msg;
    msg << "iteration clock: t=" << t << " outside [0, " << t_max << "]";
    throw ConfigError(msg.str());
  }
}

double IterationClock::fraction() const {
  validate();
  return static_cast<double>(t) / static_cast<double>(t_max);
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
  case ScheduleKind::constant:
    return "constant";
  case ScheduleKind::ldiw:
    return "ldiw";
  case ScheduleKind::tvac:
    return "tvac";
  }
  throw ConfigError("unknown schedule kind");
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
  if (name == "constant")
    return ScheduleKind::constant;
  if (name == "ldiw")
    return ScheduleKind::ldiw;
  if (name == "tvac")
    return ScheduleKind::tvac;
  throw ConfigError("unknown schedule kind '" + std::string(name) + "'");
}

ScheduleSpec ScheduleSpec::constant_defaults() { return ScheduleSpec{}; }

ScheduleSpec ScheduleSpec::ldiw_defaults() {
  ScheduleSpec s;
  s.kind = ScheduleKind::ldiw;
  return s;
}

ScheduleSpec ScheduleSpec::tvac_defaults() {
  ScheduleSpec s;
  s.kind = ScheduleKind::tvac;
  return s;
}

void ScheduleSpec::validate() const {
  std::vector<std::string> problems;
  auto check_value = [&](const char *name, double v) {
    if (!std::isfinite(v) || v < 0.0)
      problems.push_back(std::string(name) + " must be finite and non-negative");
  };
  check_value("omega_const", omega_const);
  check_value("c1_const", c1_const);
  check_value("c2_const", c2_const);
  check_value("omega_max", omega_max);
  check_value("omega_min", omega_min);
  check_value("c1_max", c1_max);
  check_value("c1_min", c1_min);
  check_value("c2_max", c2_max);
  check_value("c2_min", c2_min);
  if (kind != ScheduleKind::constant && !(omega_max >= omega_min))
    problems.emplace_back("omega_max must be >= omega_min");
  if (kind != ScheduleKind::constant) {
    if (!(c1_max >= c1_min))
      problems.emplace_back("c1_max must be >= c1_min");
    if (!(c2_max >= c2_min))
      problems.emplace_back("c2_max must be >= c2_min");
  }
  if (!problems.empty()) {
    std::string msg = "schedule:";
    for (const auto &p : problems)
      msg += " " + p + ";";
    msg.pop_back();
    throw ConfigError(msg);
  }
}

double ldiw_weight(const IterationClock &clock, double omega_max,
                   double omega_min) {
  if (!(omega_max >= omega_min))
    throw ConfigError("ldiw_weight: omega_max must be >= omega_min");
  return interpolate(omega_max, omega_min, clock.fraction());
}

AccelerationPair tvac_coeffs(const IterationClock &clock,
                             const ScheduleSpec &spec) {
  if (spec.kind != ScheduleKind::tvac)
    throw ConfigError("tvac_coeffs: schedule kind is not tvac");
  const double f = clock.fraction();
  return {interpolate(spec.c1_max, spec.c1_min, f),
          interpolate(spec.c2_min, spec.c2_max, f)};
}

Coefficients coefficients_at(const ScheduleSpec &spec,
                             const IterationClock &clock) {
  switch (spec.kind) {
  case ScheduleKind::constant:
    return {spec.omega_const, spec.c1_const, spec.c2_const};
  case ScheduleKind::ldiw:
    return {ldiw_weight(clock, spec.omega_max, spec.omega_min), spec.c1_const,
            spec.c2_const};
  case ScheduleKind::tvac: {
    const auto acc = tvac_coeffs(clock, spec);
    return {ldiw_weight(clock, spec.omega_max, spec.omega_min), acc.c1,
            acc.c2};
  }
  }
  throw ConfigError("coefficients_at: unknown schedule kind");
}

} // namespace mspso
