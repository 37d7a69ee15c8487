#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mspso {

/// Raised for invalid search spaces, schedules, stage plans and experiment
/// configurations. Always thrown before any objective evaluation happens.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an objective produces a non-finite value. Engine-raised errors
/// carry the offending particle; errors from plain formula evaluation do not.
class EvaluationError : public std::runtime_error {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit EvaluationError(const std::string &what);
  EvaluationError(std::size_t particle_index, std::vector<double> position,
                  const std::string &what);

  std::size_t particle_index() const { return m_particle_index; }
  const std::vector<double> &position() const { return m_position; }

private:
  std::size_t m_particle_index = npos;
  std::vector<double> m_position;
};

} // namespace mspso
