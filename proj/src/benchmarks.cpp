#include "mspso/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace mspso {

const std::vector<std::string> &benchmark_names() {
  static const std::vector<std::string> names{"sphere", "rastrigin",
                                              "rosenbrock", "ackley",
                                              "griewank"};
  return names;
}

bool is_benchmark(std::string_view name) {
  for (const auto &n : benchmark_names())
    if (n == name)
      return true;
  return false;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x)
    s += v * v;
  return s;
}

double rastrigin(std::span<const double> x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x)
    s += v * v - 10.0 * std::cos(two_pi * v);
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double ackley(std::span<const double> x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double n = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(two_pi * v);
  }
  return 20.0 + std::numbers::e - 20.0 * std::exp(-0.2 * std::sqrt(sq / n)) -
         std::exp(cs / n);
}

double griewank(std::span<const double> x) {
  double sum = 0.0, prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i] * x[i];
    prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return 1.0 + sum / 4000.0 - prod;
}

double eval_benchmark(std::string_view name, std::span<const double> x) {
  if (name == "sphere")
    return sphere(x);
  if (name == "rastrigin")
    return rastrigin(x);
  if (name == "rosenbrock")
    return rosenbrock(x);
  if (name == "ackley")
    return ackley(x);
  if (name == "griewank")
    return griewank(x);
  throw ConfigError("unknown benchmark '" + std::string(name) + "'");
}

Objective make_benchmark(std::string_view name, std::size_t dimension) {
  if (dimension == 0)
    throw ConfigError("benchmark dimension must be positive");
  double lo = 0.0, hi = 0.0;
  double (*fn)(std::span<const double>) = nullptr;
  if (name == "sphere") {
    lo = -5.12, hi = 5.12, fn = &sphere;
  } else if (name == "rastrigin") {
    lo = -5.12, hi = 5.12, fn = &rastrigin;
  } else if (name == "rosenbrock") {
    lo = -5.0, hi = 10.0, fn = &rosenbrock;
  } else if (name == "ackley") {
    lo = -32.768, hi = 32.768, fn = &ackley;
  } else if (name == "griewank") {
    lo = -600.0, hi = 600.0, fn = &griewank;
  } else {
    throw ConfigError("unknown benchmark '" + std::string(name) + "'");
  }
  return Objective{std::string(name), SearchSpace::uniform(dimension, lo, hi),
                   Sense::minimize, 0.0, fn};
}

} // namespace mspso
