#include "mspso/local_search.hpp"

#include <algorithm>
#include <cmath>

namespace mspso {

LocalOptimum compass_search(const std::function<double(std::span<const double>)> &fn,
                            const SearchSpace &space, Vector start,
                            const CompassOptions &options) {
  const std::size_t dim = space.dimension();
  if (start.size() != dim)
    throw ConfigError("compass_search: start point has the wrong dimension");
  for (std::size_t d = 0; d < dim; ++d)
    start[d] = std::clamp(start[d], space.lower()[d], space.upper()[d]);

  LocalOptimum best{std::move(start), 0.0, 0};
  best.value = fn(best.position);
  best.evaluations = 1;

  double step = options.initial_step;
  Vector trial;
  while (step >= options.min_step &&
         best.evaluations < options.max_evaluations) {
    bool improved = false;
    for (std::size_t d = 0; d < dim; ++d) {
      const double width = space.upper()[d] - space.lower()[d];
      for (double sign : {1.0, -1.0}) {
        const double moved =
            std::clamp(best.position[d] + sign * step * width,
                       space.lower()[d], space.upper()[d]);
        if (moved == best.position[d])
          continue;
        trial = best.position;
        trial[d] = moved;
        const double v = fn(trial);
        ++best.evaluations;
        if (v < best.value) {
          best.position.swap(trial);
          best.value = v;
          improved = true;
          break;
        }
      }
    }
    if (!improved)
      step *= 0.5;
  }
  return best;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<LocalOptimum> distinct_optima(std::vector<LocalOptimum> optima,
                                          double threshold) {
  std::stable_sort(optima.begin(), optima.end(),
                   [](const LocalOptimum &a, const LocalOptimum &b) {
                     return a.value < b.value;
                   });
  std::vector<LocalOptimum> reps;
  for (auto &o : optima) {
    const bool novel = std::all_of(reps.begin(), reps.end(), [&](const auto &r) {
      return euclidean_distance(r.position, o.position) > threshold;
    });
    if (novel)
      reps.push_back(std::move(o));
  }
  return reps;
}

} // namespace mspso

namespace mspso {

std::vector<LocalOptimum>
multistart_search(const std::function<double(std::span<const double>)> &fn,
                  const SearchSpace &space, int starts, std::uint64_t seed,
                  const CompassOptions &options) {
  std::vector<LocalOptimum> out;
  out.reserve(static_cast<std::size_t>(std::max(starts, 0)));
  for (int s = 0; s < starts; ++s) {
    Vector x(space.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double r = draw_uniform({seed, s, 0, d, 0});
      x[d] = space.lower()[d] + r * (space.upper()[d] - space.lower()[d]);
    }
    out.push_back(compass_search(fn, space, std::move(x), options));
  }
  return out;
}

} // namespace mspso
