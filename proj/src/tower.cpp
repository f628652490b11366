#include "coarselab/tower.hpp"

#include "coarselab/errors.hpp"

namespace coarselab {

TowerMetric tower_metrize(const FiniteSpace& space, std::span<const Family> seed,
                          std::size_t depth) {
  if (depth == 0) throw ParameterError("depth: must be at least 1");
  const std::size_t n = space.size();
  Family level0 = Family::singletons(n);
  for (const auto& f : seed) {
    if (f.universe() != n) throw MalformedError("seed: family does not live over the space");
    level0 = family_union(level0, f);
  }
  ScaleTower tower;
  tower.levels.push_back(level0.normalized());
  while (tower.levels.size() < depth) {
    const Family& last = tower.levels.back();
    Family next = star(last, last).normalized();
    if (next == last) {
      tower.stabilized = true;
      break;
    }
    tower.levels.push_back(std::move(next));
  }

  DistanceMatrix first(n);
  for (PointIndex i = 0; i < n; ++i) first(i, i) = 0.0;
  for (std::size_t li = 0; li < tower.levels.size(); ++li) {
    const double value = static_cast<double>(li);
    for (const auto& m : tower.levels[li].members()) {
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = a + 1; b < m.size(); ++b) {
          if (first(m[a], m[b]) == kInfinity) first(m[a], m[b]) = first(m[b], m[a]) = value;
        }
      }
    }
  }

  DistanceMatrix shifted(n);
  for (PointIndex i = 0; i < n; ++i) {
    for (PointIndex j = 0; j < n; ++j) {
      shifted(i, j) = i == j ? 0.0 : first(i, j) + 1.0;
    }
  }
  const double radius = covering_radius(shifted, space.basepoint(), space.core());
  FiniteSpace metric(space.labels(), std::move(shifted), space.basepoint(), radius);
  return TowerMetric{std::move(tower), std::move(first), std::move(metric)};
}

}  // namespace coarselab
