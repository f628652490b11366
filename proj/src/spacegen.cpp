#include "coarselab/spacegen.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <cmath>
#include <cstdio>
#include <deque>

#include "coarselab/errors.hpp"
#include "coarselab/graph.hpp"

namespace coarselab {
namespace {

std::string format_level(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

// Word metric of one quotient level: steps a -> a*s and a -> a*s^-1.
DistanceMatrix word_metric(const QuotientLevel& level) {
  const std::size_t m = level.mul.size();
  std::vector<std::vector<std::size_t>> neighbours(m);
  for (std::size_t s : level.generator_images) {
    for (std::size_t a = 0; a < m; ++a) {
      neighbours[a].push_back(level.mul[a][s]);
      neighbours[level.mul[a][s]].push_back(a);
    }
  }
  DistanceMatrix d(m);
  for (std::size_t src = 0; src < m; ++src) {
    auto row = d.row(src);
    row[src] = 0.0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t b : neighbours[a]) {
        if (row[b] == kInfinity) {
          row[b] = row[a] + 1.0;
          queue.push_back(b);
        }
      }
    }
  }
  return d;
}

void validate_level(const QuotientLevel& level, std::size_t index, std::size_t generators) {
  const std::string field = "levels[" + std::to_string(index) + "]";
  const std::size_t m = level.mul.size();
  if (m == 0) throw SpecError(field + ".mul: empty quotient");
  for (const auto& row : level.mul) {
    if (row.size() != m) throw SpecError(field + ".mul: table is not square");
    std::vector<bool> seen(m, false);
    for (std::size_t v : row) {
      if (v >= m || seen[v]) throw SpecError(field + ".mul: rows must be permutations");
      seen[v] = true;
    }
  }
  for (std::size_t b = 0; b < m; ++b) {
    std::vector<bool> seen(m, false);
    for (std::size_t a = 0; a < m; ++a) {
      if (seen[level.mul[a][b]]) throw SpecError(field + ".mul: columns must be permutations");
      seen[level.mul[a][b]] = true;
    }
  }
  if (level.generator_images.size() != generators) {
    throw SpecError(field + ".generator_images: expected one image per generator");
  }
  for (std::size_t g : level.generator_images) {
    if (g >= m) throw SpecError(field + ".generator_images: element out of range");
  }
}

}  // namespace

FiniteSpace segment_space(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ParameterError("lo: must not exceed hi");
  const std::size_t n = static_cast<std::size_t>(hi - lo) + 1;
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::int64_t v = lo; v <= hi; ++v) labels.push_back(std::to_string(v));
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, j) = std::fabs(static_cast<double>(i) - static_cast<double>(j));
    }
  }
  PointIndex base = 0;
  double radius = static_cast<double>(hi - lo);
  if (lo <= 0 && hi >= 0) {
    base = static_cast<PointIndex>(-lo);
    if (lo == 0) {
      radius = static_cast<double>(hi);
    } else if (hi == 0) {
      radius = static_cast<double>(-lo);
    } else {
      radius = static_cast<double>(std::min(-lo, hi));
    }
  }
  return FiniteSpace(std::move(labels), std::move(d), base, radius);
}

namespace {

// Integer labels of a segment window with the index of each value.
std::map<std::int64_t, PointIndex> integer_points(const FiniteSpace& s) {
  std::map<std::int64_t, PointIndex> out;
  for (PointIndex i = 0; i < s.size(); ++i) {
    const auto& label = s.label(i);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
    if (ec != std::errc{} || ptr != label.data() + label.size()) {
      throw MalformedError("points: '" + label + "' is not an integer");
    }
    out.emplace(v, i);
  }
  return out;
}

}  // namespace

GroupAction negation_action(std::shared_ptr<const FiniteSpace> segment) {
  const auto pts = integer_points(*segment);
  Permutation perm(segment->size());
  for (const auto& [v, i] : pts) {
    auto it = pts.find(-v);
    if (it == pts.end()) throw ParameterError("space: negation needs a window symmetric about 0");
    perm[i] = it->second;
  }
  return GroupAction(std::move(segment), {{"gamma", std::move(perm)}});
}

GroupAction translation_action(std::shared_ptr<const FiniteSpace> segment) {
  const auto pts = integer_points(*segment);
  const std::int64_t lo = pts.begin()->first;
  const std::int64_t hi = pts.rbegin()->first;
  if (static_cast<std::size_t>(hi - lo) + 1 != pts.size()) {
    throw ParameterError("space: translation needs consecutive integers");
  }
  Permutation up(segment->size()), down(segment->size());
  for (const auto& [v, i] : pts) {
    up[i] = pts.at(v == hi ? lo : v + 1);
    down[i] = pts.at(v == lo ? hi : v - 1);
  }
  return GroupAction(std::move(segment), {{"+1", std::move(up)}, {"-1", std::move(down)}},
                     {{"+1", "-1"}});
}

FiniteSpace axes_space(std::int64_t arms, std::int64_t length) {
  if (arms < 1) throw ParameterError("arms: must be at least 1");
  if (length < 1) throw ParameterError("length: must be at least 1");
  const auto k = static_cast<std::size_t>(arms);
  const auto len = static_cast<std::size_t>(length);
  const std::size_t n = 1 + k * len;
  std::vector<std::string> labels{"o"};
  std::vector<std::size_t> arm(n, 0), height(n, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t t = 1; t <= len; ++t) {
      arm[labels.size()] = a;
      height[labels.size()] = t;
      labels.push_back(std::to_string(a) + ":" + std::to_string(t));
    }
  }
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double hi = static_cast<double>(height[i]);
      const double hj = static_cast<double>(height[j]);
      if (i == 0 || j == 0 || arm[i] != arm[j]) {
        d(i, j) = hi + hj;
      } else {
        d(i, j) = std::fabs(hi - hj);
      }
    }
  }
  return FiniteSpace(std::move(labels), std::move(d), 0, static_cast<double>(length));
}

namespace {

void validate_cone(const ConeSpec& spec) {
  if (spec.levels.empty() || spec.levels.front() != 0.0) {
    throw SpecError("levels: must start at 0");
  }
  if (spec.weight.size() != spec.levels.size()) {
    throw SpecError("weight: expected one value per level");
  }
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    if (!std::isfinite(spec.levels[i])) throw SpecError("levels: must be finite");
    if (i > 0 && !(spec.levels[i] > spec.levels[i - 1])) {
      throw SpecError("levels: must be strictly ascending");
    }
    const double phi = spec.weight[i];
    if (!std::isfinite(phi)) throw SpecError("weight: must be finite");
    if (i == 0 && phi != 0.0) throw SpecError("weight: Phi(0) must be 0");
    if (i > 0 && !(phi > 0.0)) {
      throw SpecError("weight: Phi(" + format_level(spec.levels[i]) + ") must be positive");
    }
  }
}

}  // namespace

FiniteSpace cone_space(const ConeSpec& spec) {
  validate_cone(spec);
  const std::size_t b = spec.base.size();
  const std::size_t lv = spec.levels.size() - 1;
  const std::size_t n = 1 + lv * b;
  std::vector<std::string> labels{"apex"};
  std::vector<std::size_t> level_of(n, 0), base_of(n, 0);
  for (std::size_t l = 1; l <= lv; ++l) {
    for (std::size_t x = 0; x < b; ++x) {
      level_of[labels.size()] = l;
      base_of[labels.size()] = x;
      labels.push_back(spec.base.label(x) + "@" + format_level(spec.levels[l]));
    }
  }
  DistanceMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double ti = spec.levels[level_of[i]];
      const double tj = spec.levels[level_of[j]];
      if (i == 0 || j == 0) {
        // Best representative of the apex is the base point itself.
        w(i, j) = std::fabs(ti - tj);
      } else {
        const double phi = std::max(spec.weight[level_of[i]], spec.weight[level_of[j]]);
        w(i, j) = std::fabs(ti - tj) + phi * spec.base.dist(base_of[i], base_of[j]);
      }
    }
  }
  DistanceMatrix d = metric_closure(w);
  return FiniteSpace(std::move(labels), std::move(d), 0, spec.levels.back());
}

Permutation cone_lift(const ConeSpec& spec, const Permutation& base_perm) {
  const std::size_t b = spec.base.size();
  if (base_perm.size() != b) throw MalformedError("perm: must permute the base");
  const std::size_t lv = spec.levels.empty() ? 0 : spec.levels.size() - 1;
  Permutation out(1 + lv * b);
  out[0] = 0;
  for (std::size_t l = 0; l < lv; ++l) {
    for (std::size_t x = 0; x < b; ++x) out[1 + l * b + x] = 1 + l * b + base_perm[x];
  }
  return out;
}

BoxSpec z_box_spec(const std::vector<std::int64_t>& moduli) {
  if (moduli.empty()) throw SpecError("moduli: must list at least one level");
  BoxSpec spec;
  spec.generator_symbols = {"+1"};
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const std::int64_t n = moduli[i];
    if (n < 1) throw SpecError("moduli[" + std::to_string(i) + "]: must be positive");
    if (i > 0) {
      const std::int64_t prev = moduli[i - 1];
      if (n <= prev || n % prev != 0) {
        throw SpecError("moduli[" + std::to_string(i) + "]: " + std::to_string(prev) +
                        " must divide " + std::to_string(n) + " and be smaller");
      }
    }
    const auto m = static_cast<std::size_t>(n);
    QuotientLevel level;
    level.mul.assign(m, std::vector<std::size_t>(m));
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t c = 0; c < m; ++c) level.mul[a][c] = (a + c) % m;
    }
    level.generator_images = {1 % m};
    if (i > 0) {
      const auto prev = static_cast<std::size_t>(moduli[i - 1]);
      for (std::size_t a = 0; a < m; ++a) level.projection.push_back(a % prev);
    }
    spec.levels.push_back(std::move(level));
  }
  return spec;
}

BoxSpace box_space(const BoxSpec& spec) {
  if (spec.levels.empty()) throw SpecError("levels: must list at least one level");
  const std::size_t gens = spec.generator_symbols.size();
  std::vector<std::size_t> offset;
  std::size_t n = 0;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const auto& level = spec.levels[i];
    validate_level(level, i, gens);
    if (i == 0) {
      if (!level.projection.empty()) throw SpecError("levels[0].projection: must be empty");
    } else {
      const auto& prev = spec.levels[i - 1];
      const std::string field = "levels[" + std::to_string(i) + "].projection";
      if (level.projection.size() != level.mul.size()) {
        throw SpecError(field + ": expected one image per element");
      }
      for (std::size_t p : level.projection) {
        if (p >= prev.mul.size()) throw SpecError(field + ": element out of range");
      }
      for (std::size_t a = 0; a < level.mul.size(); ++a) {
        for (std::size_t c = 0; c < level.mul.size(); ++c) {
          if (level.projection[level.mul[a][c]] != prev.mul[level.projection[a]][level.projection[c]]) {
            throw SpecError(field + ": not a homomorphism");
          }
        }
      }
      for (std::size_t k = 0; k < gens; ++k) {
        if (level.projection[level.generator_images[k]] != prev.generator_images[k]) {
          throw SpecError(field + ": does not respect generator '" + spec.generator_symbols[k] + "'");
        }
      }
    }
    offset.push_back(n);
    n += level.mul.size();
  }

  std::vector<WeightedEdge> edges;
  std::vector<std::string> labels(n);
  std::vector<std::vector<PointIndex>> level_points(spec.levels.size());
  std::vector<double> weights;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const auto& level = spec.levels[i];
    const std::size_t m = level.mul.size();
    for (std::size_t a = 0; a < m; ++a) {
      labels[offset[i] + a] = "L" + std::to_string(i + 1) + ":" + std::to_string(a);
      level_points[i].push_back(offset[i] + a);
      for (std::size_t s : level.generator_images) {
        const std::size_t c = level.mul[a][s];
        if (c != a) edges.push_back({offset[i] + a, offset[i] + c, 1.0});
      }
    }
    if (i > 0) {
      const DistanceMatrix dm = word_metric(level);
      double diam = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        for (double v : dm.row(a)) diam = std::max(diam, v);
      }
      // Levels are numbered from 1, so this edge joins level i+1 to level i.
      const double w = std::max(2.0 * static_cast<double>(i) + 2.0, diam);
      weights.push_back(w);
      for (std::size_t a = 0; a < m; ++a) {
        edges.push_back({offset[i] + a, offset[i - 1] + level.projection[a], w});
      }
    }
  }
  DistanceMatrix d = graph_distances(n, edges);

  std::vector<std::pair<std::string, Permutation>> tables;
  for (std::size_t k = 0; k < gens; ++k) {
    Permutation perm(n);
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
      const auto& level = spec.levels[i];
      for (std::size_t a = 0; a < level.mul.size(); ++a) {
        perm[offset[i] + a] = offset[i] + level.mul[level.generator_images[k]][a];
      }
    }
    tables.emplace_back(spec.generator_symbols[k], std::move(perm));
  }
  auto tmp = FiniteSpace(labels, d, 0, 0.0);
  const double radius = tmp.max_finite_radius();
  auto space = std::make_shared<const FiniteSpace>(std::move(labels), std::move(d), 0, radius);
  GroupAction action(space, std::move(tables));
  return BoxSpace{space, std::move(action), std::move(level_points), std::move(weights)};
}

}  // namespace coarselab
