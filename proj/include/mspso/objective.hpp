#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "mspso/core.hpp"

namespace mspso {

enum class Sense { minimize, maximize };

/// A black-box objective over a box. `fn` returns the raw value in the
/// objective's own sense; the engine only ever sees `minimized`.
struct Objective {
  std::string name;
  SearchSpace space;
  Sense sense = Sense::minimize;
  std::optional<double> known_optimum;
  std::function<double(std::span<const double>)> fn;

  std::size_t dimension() const { return space.dimension(); }

  double raw(std::span<const double> x) const { return fn(x); }

  double minimized(std::span<const double> x) const {
    const double v = fn(x);
    return sense == Sense::maximize ? -v : v;
  }

  /// Maps an engine-side (minimized) value back to the objective's sense.
  double to_raw(double minimized_value) const {
    return sense == Sense::maximize ? -minimized_value : minimized_value;
  }
};

} // namespace mspso
