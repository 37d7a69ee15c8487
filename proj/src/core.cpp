#include "mspso/core.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace mspso {

EvaluationError::EvaluationError(const std::string &what)
    : std::runtime_error(what) {}

EvaluationError::EvaluationError(std::size_t particle_index,
                                 std::vector<double> position,
                                 const std::string &what)
    : std::runtime_error(what), m_particle_index(particle_index),
      m_position(std::move(position)) {}

SearchSpace::SearchSpace(Vector lower, Vector upper)
    : m_lower(std::move(lower)), m_upper(std::move(upper)) {
  if (m_lower.empty())
    throw ConfigError("search space: dimension must be positive");
  if (m_lower.size() != m_upper.size())
    throw ConfigError("search space: lower and upper bounds differ in length");
  m_vmax.resize(m_lower.size());
  for (std::size_t d = 0; d < m_lower.size(); ++d) {
    if (!std::isfinite(m_lower[d]) || !std::isfinite(m_upper[d]) ||
        !(m_lower[d] < m_upper[d])) {
      std::ostringstream msg;
      msg << "search space: dimension " << d << " needs finite lower < upper (got ["
          << m_lower[d] << ", " << m_upper[d] << "])";
      throw ConfigError(msg.str());
    }
    m_vmax[d] = 0.5 * (m_upper[d] - m_lower[d]);
  }
}

SearchSpace SearchSpace::uniform(std::size_t dimension, double lower,
                                 double upper) {
  return SearchSpace(Vector(dimension, lower), Vector(dimension, upper));
}

bool SearchSpace::contains(std::span<const double> x) const {
  if (x.size() != dimension())
    return false;
  for (std::size_t d = 0; d < x.size(); ++d)
    if (!(x[d] >= m_lower[d] && x[d] <= m_upper[d]))
      return false;
  return true;
}

namespace philox {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi,
                    std::uint32_t &lo) {
  const std::uint64_t p = std::uint64_t{a} * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline Counter round(const Counter &c, const Key &k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kM0, c[0], hi0, lo0);
  mulhilo(kM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}
} // namespace

Counter philox4x32_10(Counter ctr, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    ctr = round(ctr, key);
  }
  return ctr;
}

} // namespace philox

double draw_uniform(const RngStreamKey &key) {
  // Counter words: iteration shifted so that init (-1) maps to 0, particle,
  // dimension, slot. Indices beyond 2^32 wrap.
  const philox::Counter ctr{static_cast<std::uint32_t>(key.iteration + 1),
                            static_cast<std::uint32_t>(key.particle),
                            static_cast<std::uint32_t>(key.dimension),
                            key.slot};
  const philox::Key k{static_cast<std::uint32_t>(key.seed),
                      static_cast<std::uint32_t>(key.seed >> 32)};
  const auto out = philox::philox4x32_10(ctr, k);
  const std::uint64_t bits =
      ((std::uint64_t{out[0]} << 32) | out[1]) >> 11; // 53 bits
  return static_cast<double>(bits) * 0x1.0p-53;
}

std::vector<Particle> init_population(const SearchSpace &space,
                                      std::size_t count, std::uint64_t seed) {
  if (count == 0)
    throw ConfigError("init_population: count must be at least 1");
  const std::size_t dim = space.dimension();
  std::vector<Particle> particles(count);
  for (std::size_t i = 0; i < count; ++i) {
    Particle &p = particles[i];
    p.index = i;
    p.position.resize(dim);
    p.velocity.assign(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
      const double r = draw_uniform({seed, kInitIteration, i, d, 0});
      const double lo = space.lower()[d];
      const double hi = space.upper()[d];
      // lo + r*(hi-lo) can round up to hi; keep the half-open contract.
      double x = lo + r * (hi - lo);
      if (x >= hi)
        x = std::nextafter(hi, lo);
      p.position[d] = x;
    }
    p.pbest_position = p.position;
  }
  return particles;
}

Particle clamp_to_bounds(Particle particle, const SearchSpace &space) {
  for (std::size_t d = 0; d < particle.position.size(); ++d) {
    if (particle.position[d] < space.lower()[d]) {
      particle.position[d] = space.lower()[d];
      particle.velocity[d] = 0.0;
    } else if (particle.position[d] > space.upper()[d]) {
      particle.position[d] = space.upper()[d];
      particle.velocity[d] = 0.0;
    }
  }
  return particle;
}

} // namespace mspso
