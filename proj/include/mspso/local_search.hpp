#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mspso/core.hpp"

namespace mspso {

struct CompassOptions {
  double initial_step = 0.25; // fraction of each dimension's width
  double min_step = 1e-6;     // same units as initial_step
  std::size_t max_evaluations = 200000;
};

struct LocalOptimum {
  Vector position;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Bounded compass (coordinate pattern) search that minimizes `fn` from
/// `start`. Steps are accepted on strict improvement; the step halves after a
/// full sweep with no improvement.
LocalOptimum compass_search(const std::function<double(std::span<const double>)> &fn,
                            const SearchSpace &space, Vector start,
                            const CompassOptions &options = {});

/// Greedy clustering of optima sorted by value: an optimum becomes a new
/// representative when it is farther than `threshold` (Euclidean) from every
/// representative kept so far. Returned representatives are pairwise farther
/// apart than `threshold`.
std::vector<LocalOptimum> distinct_optima(std::vector<LocalOptimum> optima,
                                          double threshold);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

} // namespace mspso

namespace mspso {

/// Compass search from `starts` points drawn uniformly in the box with the
/// counter-based generator (iteration = start index, slot 0).
std::vector<LocalOptimum>
multistart_search(const std::function<double(std::span<const double>)> &fn,
                  const SearchSpace &space, int starts, std::uint64_t seed,
                  const CompassOptions &options = {});

} // namespace mspso
