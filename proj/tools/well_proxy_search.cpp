// Locates the well proxy's best point: exhaustive enumeration of movable-well
// placements over the sweet-spot lattice, then compass polish of the most
// promising placements (and of seeded random starts). Prints the
// `reference.*` fixture lines, or rewrites them in place with --write.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mspso/local_search.hpp"
#include "mspso/well_proxy.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Freeze the well proxy reference optimum"};
  std::string fixture = mspso::default_well_proxy_fixture().string();
  bool write = false;
  std::size_t polish = 16;
  app.add_option("--fixture", fixture, "Fixture file");
  app.add_flag("--write", write, "Rewrite reference.* lines in the fixture");
  app.add_option("--polish", polish, "Lattice placements to polish");
  CLI11_PARSE(app, argc, argv);

  const auto model = mspso::load_well_proxy(fixture);
  const auto space = model.space();
  const auto dim = space.dimension();
  auto neg = [&](std::span<const double> x) { return -model.evaluate(x); };

  // Heel and toe of each movable well snapped to sweet-spot centers.
  const auto &spots = model.sweet_spots;
  std::vector<std::array<double, 6>> options;
  for (const auto &h : spots)
    for (const auto &t : spots)
      options.push_back({h.x, h.y, h.z, t.x, t.y, t.z});

  const int wells = model.config.n_movable_wells;
  std::vector<std::pair<double, std::vector<double>>> lattice;
  std::vector<std::size_t> pick(static_cast<std::size_t>(wells), 0);
  // Unordered selections with repetition: pick is non-decreasing.
  while (true) {
    std::vector<double> x(dim, 0.5);
    for (int w = 0; w < wells; ++w)
      for (int c = 0; c < 6; ++c)
        x[static_cast<std::size_t>(6 * w + c)] = options[pick[w]][c];
    lattice.emplace_back(neg(x), std::move(x));

    int k = wells - 1;
    while (k >= 0 && pick[k] + 1 == options.size())
      --k;
    if (k < 0)
      break;
    ++pick[k];
    for (int j = k + 1; j < wells; ++j)
      pick[j] = pick[k];
  }
  std::sort(lattice.begin(), lattice.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  std::cerr << "lattice placements: " << lattice.size() << '\n';

  mspso::CompassOptions opts;
  opts.initial_step = 0.05;
  opts.min_step = 1e-9;
  opts.max_evaluations = 2'000'000;

  mspso::LocalOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min(polish, lattice.size()); ++i) {
    auto o = mspso::compass_search(neg, space, lattice[i].second, opts);
    std::cerr << "lattice " << i << ": " << -lattice[i].first << " -> "
              << -o.value << '\n';
    if (o.value < best.value)
      best = std::move(o);
  }

  auto random = mspso::multistart_search(
      neg, space, model.multimodality_starts, model.multimodality_seed, opts);
  for (auto &o : random)
    if (o.value < best.value) {
      std::cerr << "random start improved the lattice optimum: " << -o.value
                << '\n';
      best = std::move(o);
    }
  const auto distinct =
      mspso::distinct_optima(random, model.multimodality_distance);
  std::cerr << "distinct optima among " << random.size()
            << " random starts: " << distinct.size() << '\n';

  std::ostringstream lines;
  lines << "# reference optimum: written by well_proxy_search, do not edit\n"
        << "reference.best_wcf = " << fmt(-best.value) << '\n'
        << "reference.best_point =";
  for (double v : best.position)
    lines << ' ' << fmt(v);
  lines << '\n';

  if (!write) {
    std::cout << lines.str();
    return 0;
  }
  std::ifstream in(fixture);
  std::ostringstream kept;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("reference.", 0) != 0 &&
        line.rfind("# reference optimum", 0) != 0)
      kept << line << '\n';
  in.close();
  std::ofstream out(fixture, std::ios::trunc);
  out << kept.str() << lines.str();
  std::cerr << "wrote reference optimum to " << fixture << '\n';
  return 0;
}
