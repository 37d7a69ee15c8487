#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mspso/error.hpp"

namespace mspso {

using Vector = std::vector<double>;

/// Box-bounded real search space.
class SearchSpace {
public:
  SearchSpace(Vector lower, Vector upper);

  /// Same bounds in every dimension.
  static SearchSpace uniform(std::size_t dimension, double lower,
                             double upper);

  std::size_t dimension() const { return m_lower.size(); }
  const Vector &lower() const { return m_lower; }
  const Vector &upper() const { return m_upper; }

  /// Velocity cap per dimension: half the width of the box.
  const Vector &vmax() const { return m_vmax; }

  bool contains(std::span<const double> x) const;

  friend bool operator==(const SearchSpace &, const SearchSpace &) = default;

private:
  Vector m_lower;
  Vector m_upper;
  Vector m_vmax;
};

/// One candidate solution. Fitness values follow the minimization convention;
/// an unevaluated particle carries +infinity as its pbest fitness.
struct Particle {
  std::size_t index = 0; // global index, stable across swarm collapses
  Vector position;
  Vector velocity;
  Vector pbest_position;
  double pbest_fitness = std::numeric_limits<double>::infinity();

  friend bool operator==(const Particle &, const Particle &) = default;
};

/// Address of a single random draw. The generator is counter based, so a draw
/// depends only on its key and never on call order or thread scheduling.
struct RngStreamKey {
  std::uint64_t seed = 0;
  std::int64_t iteration = 0; // -1 addresses the initialization draws
  std::uint64_t particle = 0;
  std::uint64_t dimension = 0;
  std::uint32_t slot = 0; // 0 for r1, 1 for r2

  friend bool operator==(const RngStreamKey &, const RngStreamKey &) = default;
};

inline constexpr std::int64_t kInitIteration = -1;

/// Uniform draw in [0, 1) addressed by `key` (Philox4x32-10 underneath).
double draw_uniform(const RngStreamKey &key);

/// Replaceable draw source. Engines default to draw_uniform; tests inject
/// their own sequences through this hook.
using DrawFn = std::function<double(const RngStreamKey &)>;

namespace philox {
using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Raw Philox4x32 with 10 rounds.
Counter philox4x32_10(Counter ctr, Key key);
} // namespace philox

/// Positions uniform in the box (iteration -1 draws, slot 0), zero velocity,
/// pbest at the initial position with unset fitness.
std::vector<Particle> init_population(const SearchSpace &space,
                                      std::size_t count, std::uint64_t seed);

/// Moves every out-of-box coordinate onto the violated bound and zeroes the
/// matching velocity component.
Particle clamp_to_bounds(Particle particle, const SearchSpace &space);

} // namespace mspso
