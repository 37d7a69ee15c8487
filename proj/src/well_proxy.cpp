#include "mspso/well_proxy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#ifndef MSPSO_DEFAULT_FIXTURE
#define MSPSO_DEFAULT_FIXTURE "data/well_proxy_v1.fixture"
#endif

namespace mspso {

double wcf(const ProductionTotals &totals, double weight_water) {
  if (!std::isfinite(totals.q_op) || !std::isfinite(totals.q_wp) ||
      !std::isfinite(totals.q_wi) || !std::isfinite(weight_water))
    throw EvaluationError("wcf: non-finite production totals");
  return totals.q_op - weight_water * (totals.q_wp + totals.q_wi);
}

namespace {

double sq_dist(const Point3 &a, const Point3 &b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// log(1 + e^v) without overflow for large v.
double softplus(double v) {
  return v > 30.0 ? v : std::log1p(std::exp(v));
}

// Order-independent sum: the terms are sorted first so that any permutation
// of the inputs yields the same bits.
double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

struct WellGeometry {
  Point3 heel, mid, toe;
};

WellGeometry geometry(std::span<const double> x, int well) {
  const auto b = static_cast<std::size_t>(6 * well);
  WellGeometry g;
  g.heel = {x[b], x[b + 1], x[b + 2]};
  g.toe = {x[b + 3], x[b + 4], x[b + 5]};
  g.mid = {0.5 * (g.heel.x + g.toe.x), 0.5 * (g.heel.y + g.toe.y),
           0.5 * (g.heel.z + g.toe.z)};
  return g;
}

} // namespace

void WellProxyModel::validate() const {
  std::vector<std::string> problems;
  const auto &c = config;
  if (c.n_movable_wells <= 0)
    problems.emplace_back("n_movable_wells must be positive");
  if (c.coords_per_well != 6)
    problems.emplace_back("coords_per_well must be 6 (heel xyz, toe xyz)");
  if (c.n_producers < c.n_movable_wells || c.n_producers > c.n_wells_total)
    problems.emplace_back(
        "n_producers must lie in [n_movable_wells, n_wells_total]");
  if (c.n_control_times <= 0)
    problems.emplace_back("n_control_times must be positive");
  if (!std::isfinite(c.weight_water) || c.weight_water < 0.0)
    problems.emplace_back("weight_water must be finite and non-negative");
  if (sweet_spots.empty())
    problems.emplace_back("at least one sweet_spot is required");
  for (const auto &s : sweet_spots)
    if (!(s.sigma > 0.0) || !std::isfinite(s.amplitude))
      problems.emplace_back("sweet_spot needs sigma > 0 and finite amplitude");
  if (!(spacing_radius > 0.0))
    problems.emplace_back("spacing.radius must be positive");
  if (static_cast<int>(existing_pi.size()) != c.n_producers - c.n_movable_wells)
    problems.emplace_back("existing_pi needs n_producers - n_movable_wells values");
  if (static_cast<int>(injector_ii.size()) != c.n_wells_total - c.n_producers)
    problems.emplace_back("injector_ii needs n_wells_total - n_producers values");
  if (static_cast<int>(period_length.size()) != c.n_control_times)
    problems.emplace_back("period_length needs n_control_times values");
  for (double v : period_length)
    if (!(v > 0.0))
      problems.emplace_back("period_length entries must be positive");
  if (!(support_reference > 0.0))
    problems.emplace_back("support.reference must be positive");
  if (!(support_base >= 0.0 && support_base <= 1.0))
    problems.emplace_back("support.base must lie in [0, 1]");
  if (!reference_best_point.empty() &&
      reference_best_point.size() != c.dimension())
    problems.emplace_back("reference.best_point has the wrong length");
  if (!problems.empty()) {
    std::string msg = "well proxy fixture:";
    for (const auto &p : problems)
      msg += " " + p + ";";
    msg.pop_back();
    throw ConfigError(msg);
  }
}

SearchSpace WellProxyModel::space() const {
  return SearchSpace::uniform(config.dimension(), 0.0, 1.0);
}

double WellProxyModel::placement_score(std::span<const double> x) const {
  const int n = config.n_movable_wells;
  std::vector<WellGeometry> wells;
  wells.reserve(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w)
    wells.push_back(geometry(x, w));

  auto field = [&](const Point3 &p) {
    double f = 0.0;
    for (const auto &s : sweet_spots) {
      const double d2 = sq_dist(p, {s.x, s.y, s.z});
      f += s.amplitude * std::exp(-d2 / (2.0 * s.sigma * s.sigma));
    }
    return f;
  };
  const double two_r2 = 2.0 * spacing_radius * spacing_radius;

  std::vector<double> terms;
  for (const auto &g : wells) {
    const double quality = (field(g.heel) + field(g.mid) + field(g.toe)) / 3.0;
    double crowding = 0.0;
    for (const auto &e : existing_wells)
      crowding += std::exp(-sq_dist(g.mid, e) / two_r2);
    terms.push_back(quality - existing_spacing_penalty * crowding);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      terms.push_back(-movable_spacing_penalty *
                      std::exp(-sq_dist(wells[a].mid, wells[b].mid) / two_r2));
  return sorted_sum(std::move(terms));
}

ProductionTotals WellProxyModel::production(std::span<const double> x) const {
  const auto &c = config;
  const std::size_t bhp0 =
      static_cast<std::size_t>(c.n_movable_wells * c.coords_per_well);
  auto bhp = [&](int well, int k) {
    return x[bhp0 + static_cast<std::size_t>(c.n_control_times * well + k)];
  };

  const double movable_pi = movable_pi_scale * softplus(placement_score(x)) /
                            static_cast<double>(c.n_movable_wells);
  auto pi = [&](int producer) {
    return producer < c.n_movable_wells
               ? movable_pi
               : existing_pi[static_cast<std::size_t>(producer -
                                                      c.n_movable_wells)];
  };

  const double horizon =
      std::accumulate(period_length.begin(), period_length.end(), 0.0);
  ProductionTotals totals;
  double elapsed = 0.0;
  for (int k = 0; k < c.n_control_times; ++k) {
    const double len = period_length[static_cast<std::size_t>(k)];
    const double tau = (elapsed + 0.5 * len) / horizon;
    elapsed += len;

    // Each injector supports pressure with diminishing returns; s is the
    // mean saturation over injectors, in [0, 1).
    double injected = 0.0, s = 0.0;
    for (int j = c.n_producers; j < c.n_wells_total; ++j) {
      const double rate =
          injector_ii[static_cast<std::size_t>(j - c.n_producers)] * bhp(j, k);
      injected += rate;
      s += 1.0 - std::exp(-rate / support_reference);
    }
    s /= static_cast<double>(c.n_wells_total - c.n_producers);
    const double support = support_base + (1.0 - support_base) * s;

    for (int i = 0; i < c.n_producers; ++i) {
      const double drawdown = 1.0 - bhp(i, k);
      const double liquid = pi(i) * drawdown * support;
      const double wc = logistic(
          watercut_slope * (watercut_time * tau + watercut_drawdown * drawdown +
                            watercut_injection * s - watercut_midpoint));
      totals.q_op += len * liquid * (1.0 - wc);
      totals.q_wp += len * liquid * wc;
    }
    totals.q_wi += len * injected;
  }
  return totals;
}

double WellProxyModel::evaluate(std::span<const double> x) const {
  if (x.size() != config.dimension()) {
    std::ostringstream msg;
    msg << "well proxy: expected " << config.dimension()
        << " variables, got " << x.size();
    throw ConfigError(msg.str());
  }
  return wcf(production(x), config.weight_water);
}

namespace {

std::vector<double> parse_numbers(const std::string &values,
                                  const std::string &where) {
  std::vector<double> out;
  std::istringstream in(values);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto *first = tok.data();
    const auto *last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
      throw ConfigError(where + ": '" + tok + "' is not a number");
    out.push_back(v);
  }
  if (out.empty())
    throw ConfigError(where + ": missing value");
  return out;
}

} // namespace

WellProxyModel parse_well_proxy(const std::string &text,
                                const std::string &origin) {
  WellProxyModel m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool seen_format = false;
  std::map<std::string, int> seen;

  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);

    const bool repeatable = key == "sweet_spot" || key == "existing_well";
    if (!repeatable && seen[key]++ > 0)
      throw ConfigError(where + ": duplicate key '" + key + "'");

    if (key == "format") {
      std::istringstream vs(value);
      std::string fmt;
      vs >> fmt;
      if (fmt != "mspso-well-proxy")
        throw ConfigError(where + ": unsupported format '" + fmt + "'");
      seen_format = true;
      continue;
    }

    const auto nums = parse_numbers(value, where + " (" + key + ")");
    auto scalar = [&]() {
      if (nums.size() != 1)
        throw ConfigError(where + ": '" + key + "' takes one value");
      return nums[0];
    };
    auto integer = [&]() {
      const double v = scalar();
      if (v != std::floor(v) || std::abs(v) > 1e15)
        throw ConfigError(where + ": '" + key + "' must be an integer");
      return static_cast<long long>(v);
    };
    auto count = [&](std::size_t n) {
      if (nums.size() != n)
        throw ConfigError(where + ": '" + key + "' takes " +
                          std::to_string(n) + " values");
    };

    if (key == "version") m.version = static_cast<int>(integer());
    else if (key == "n_movable_wells") m.config.n_movable_wells = static_cast<int>(integer());
    else if (key == "coords_per_well") m.config.coords_per_well = static_cast<int>(integer());
    else if (key == "n_wells_total") m.config.n_wells_total = static_cast<int>(integer());
    else if (key == "n_producers") m.config.n_producers = static_cast<int>(integer());
    else if (key == "n_control_times") m.config.n_control_times = static_cast<int>(integer());
    else if (key == "weight_water") m.config.weight_water = scalar();
    else if (key == "sweet_spot") {
      count(5);
      m.sweet_spots.push_back({nums[0], nums[1], nums[2], nums[3], nums[4]});
    } else if (key == "existing_well") {
      count(3);
      m.existing_wells.push_back({nums[0], nums[1], nums[2]});
    }
    else if (key == "spacing.movable_penalty") m.movable_spacing_penalty = scalar();
    else if (key == "spacing.existing_penalty") m.existing_spacing_penalty = scalar();
    else if (key == "spacing.radius") m.spacing_radius = scalar();
    else if (key == "movable_pi_scale") m.movable_pi_scale = scalar();
    else if (key == "existing_pi") m.existing_pi = nums;
    else if (key == "injector_ii") m.injector_ii = nums;
    else if (key == "period_length") m.period_length = nums;
    else if (key == "support.base") m.support_base = scalar();
    else if (key == "support.reference") m.support_reference = scalar();
    else if (key == "watercut.midpoint") m.watercut_midpoint = scalar();
    else if (key == "watercut.slope") m.watercut_slope = scalar();
    else if (key == "watercut.time") m.watercut_time = scalar();
    else if (key == "watercut.drawdown") m.watercut_drawdown = scalar();
    else if (key == "watercut.injection") m.watercut_injection = scalar();
    else if (key == "reference.best_wcf") m.reference_best_wcf = scalar();
    else if (key == "reference.best_point") m.reference_best_point = nums;
    else if (key == "multimodality.starts") m.multimodality_starts = static_cast<int>(integer());
    else if (key == "multimodality.seed") m.multimodality_seed = static_cast<std::uint64_t>(integer());
    else if (key == "multimodality.distance_threshold") m.multimodality_distance = scalar();
    else if (key == "multimodality.min_optima") m.multimodality_min_optima = static_cast<int>(integer());
    else
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
  if (!seen_format)
    throw ConfigError(origin + ": missing 'format = mspso-well-proxy'");
  m.validate();
  return m;
}

WellProxyModel load_well_proxy(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open well proxy fixture " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_well_proxy(buf.str(), path.string());
}

Objective make_well_proxy_objective(WellProxyModel model) {
  auto shared = std::make_shared<const WellProxyModel>(std::move(model));
  Objective obj{"well_proxy", shared->space(), Sense::maximize, std::nullopt,
                [shared](std::span<const double> x) {
                  return shared->evaluate(x);
                }};
  if (!shared->reference_best_point.empty())
    obj.known_optimum = shared->reference_best_wcf;
  return obj;
}

std::filesystem::path default_well_proxy_fixture() {
  if (const char *env = std::getenv("MSPSO_WELL_PROXY_FIXTURE"))
    return env;
  return MSPSO_DEFAULT_FIXTURE;
}

} // namespace mspso
