#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mspso/objective.hpp"

namespace mspso {

/// Field totals over the whole production horizon, in surrogate volume units.
struct ProductionTotals {
  double q_op = 0.0; // oil produced
  double q_wp = 0.0; // water produced
  double q_wi = 0.0; // water injected
};

/// Weighted cumulative fluid: q_op - weight_water * (q_wp + q_wi).
/// Non-finite totals raise EvaluationError.
double wcf(const ProductionTotals &totals, double weight_water = 0.1);

/// Variable layout of the field development problem.
struct WellProxyConfig {
  int n_movable_wells = 3;
  int coords_per_well = 6; // heel xyz, toe xyz
  int n_wells_total = 18;
  int n_producers = 11; // wells [0, n_producers) produce, the rest inject
  int n_control_times = 4;
  double weight_water = 0.1;

  std::size_t dimension() const {
    return static_cast<std::size_t>(n_movable_wells * coords_per_well +
                                    n_wells_total * n_control_times);
  }

  friend bool operator==(const WellProxyConfig &,
                         const WellProxyConfig &) = default;
};

struct SweetSpot {
  double x = 0.0, y = 0.0, z = 0.0;
  double sigma = 0.0;
  double amplitude = 0.0;
};

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Coefficients of the analytic surrogate, loaded from a fixture file.
///
/// Coordinates are normalized: x, y, z in [0, 1] stand for the field's
/// 9 km, 3 km and 50 m extents. Every variable lives in [0, 1]:
///
///   x[6w .. 6w+5]             heel (x, y, z) and toe (x, y, z) of movable
///                             well w, for w < n_movable_wells
///   x[M + n_control_times*i + k]
///                             normalized BHP of well i at control time k,
///                             where M = n_movable_wells * coords_per_well.
///                             Wells 0 .. n_movable_wells-1 are the movable
///                             producers.
///
/// Producer liquid rate grows with drawdown (1 - bhp); injector rate grows
/// with bhp.
struct WellProxyModel {
  WellProxyConfig config;
  int version = 0;

  std::vector<SweetSpot> sweet_spots;
  std::vector<Point3> existing_wells;
  double movable_spacing_penalty = 0.0;
  double existing_spacing_penalty = 0.0;
  double spacing_radius = 0.0;

  double movable_pi_scale = 0.0;
  std::vector<double> existing_pi; // n_producers - n_movable_wells
  std::vector<double> injector_ii; // n_wells_total - n_producers
  std::vector<double> period_length; // n_control_times

  double support_base = 0.0;
  double support_reference = 0.0;

  double watercut_midpoint = 0.0;
  double watercut_slope = 0.0;
  double watercut_time = 0.0;
  double watercut_drawdown = 0.0;
  double watercut_injection = 0.0;

  // Frozen best point found by the build-time grid + polish search.
  double reference_best_wcf = 0.0;
  std::vector<double> reference_best_point;

  // Multistart check parameters.
  int multimodality_starts = 0;
  std::uint64_t multimodality_seed = 0;
  double multimodality_distance = 0.0;
  int multimodality_min_optima = 0;

  /// Throws ConfigError when the layout or any coefficient is inconsistent.
  void validate() const;

  SearchSpace space() const;

  /// Placement score of the movable wells. Depends on the coordinate blocks
  /// only as an unordered set.
  double placement_score(std::span<const double> x) const;

  ProductionTotals production(std::span<const double> x) const;

  /// Raw WCF (maximize). Wrong length raises ConfigError.
  double evaluate(std::span<const double> x) const;
};

/// Parses the fixture grammar: one `key = value...` per line, `#` comments,
/// blank lines ignored. `sweet_spot` and `existing_well` may repeat.
/// Errors name the line number.
WellProxyModel parse_well_proxy(const std::string &text,
                                const std::string &origin = "<fixture>");

WellProxyModel load_well_proxy(const std::filesystem::path &path);

/// Objective named "well_proxy" over [0,1]^90, maximize sense.
Objective make_well_proxy_objective(WellProxyModel model);

/// Fixture shipped with the source tree.
std::filesystem::path default_well_proxy_fixture();

} // namespace mspso
