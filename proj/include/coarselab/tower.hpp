#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coarselab/family.hpp"
#include "coarselab/space.hpp"

namespace coarselab {

// levels[0] is the union of the seed families plus all singletons and
// levels[i + 1] = st(levels[i], levels[i]). Levels are stored normalized
// (duplicate members removed). Construction stops early once a level
// repeats, in which case `stabilized` is set and every omitted level equals
// the last one.
struct ScaleTower {
  std::vector<Family> levels;
  bool stabilized = false;
};

struct TowerMetric {
  ScaleTower tower;
  // Smallest level index with a member containing both points (0 on the
  // diagonal); infinity when no level up to the depth does.
  DistanceMatrix first_level;
  // The metric itself: 0 on the diagonal and first_level + 1 off it. The
  // shift keeps the triangle inequality when level 0 has members with
  // more than one point.
  FiniteSpace metric;
};

// Builds `depth` levels (indices 0 .. depth-1) from the seed families.
// Throws ParameterError for depth == 0.
TowerMetric tower_metrize(const FiniteSpace& space, std::span<const Family> seed,
                          std::size_t depth);

}  // namespace coarselab
