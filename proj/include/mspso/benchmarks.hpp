#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mspso/objective.hpp"

namespace mspso {

/// Names accepted by eval_benchmark, in listing order.
const std::vector<std::string> &benchmark_names();

bool is_benchmark(std::string_view name);

/// Textbook value of a benchmark; every function has global minimum 0.
/// Unknown names raise ConfigError.
double eval_benchmark(std::string_view name, std::span<const double> x);

double sphere(std::span<const double> x);
double rastrigin(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double ackley(std::span<const double> x);
double griewank(std::span<const double> x);

/// Benchmark wrapped with its canonical domain:
///   sphere, rastrigin [-5.12, 5.12]; rosenbrock [-5, 10];
///   ackley [-32.768, 32.768]; griewank [-600, 600].
Objective make_benchmark(std::string_view name, std::size_t dimension);

} // namespace mspso
