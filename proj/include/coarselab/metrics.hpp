#pragma once

#include <string>
#include <vector>

#include "coarselab/action.hpp"
#include "coarselab/family.hpp"
#include "coarselab/space.hpp"

namespace coarselab {

enum class XgMode {
  // inf over g of d_X(x, g.x') + |g|; requires every generator to be an
  // isometry.
  isometric,
  // inf of n + sum d_X(a_i, b_i) over chains with x in S^2.a_1,
  // x' in S^2.b_n and b_i in S^4.a_{i+1}; works for any action.
  general,
};

// Metric on the window inducing the X_G structure. Same points, labels and
// basepoint as the action's space; the window radius is the smallest
// radius whose ball contains the original core.
FiniteSpace xg_metric(const GroupAction& action, XgMode mode);

enum class OrbitMetricKind {
  // min of the two directed sup-inf distances (the default variant)
  hausdorff,
  // classical Hausdorff distance: max of the two directed distances
  hausdorff_classical,
  // min over g of d_X(x, g.y); isometric actions only
  min,
};

struct OrbitMetric {
  std::vector<PointSet> orbits;  // ordered by smallest point index
  FiniteSpace metric;            // one point per orbit, labelled by its smallest member
};

OrbitMetric orbit_metric(const GroupAction& action, OrbitMetricKind kind,
                         std::size_t cap = kDefaultElementCap);

enum class QuotientVariant {
  // inf of sum d_X(a_i, b_i) over chains; may vanish between distinct fibers
  classical,
  // inf of n + sum d_X(a_i, b_i); always a metric
  chain,
};

struct QuotientMetric {
  std::vector<std::string> fiber_labels;
  std::vector<PointIndex> fiber_of;  // point -> index into fiber_labels
  FiniteSpace metric;
};

// `fiber_map[x]` is the label of the fiber containing point x. Fibers are
// ordered by first appearance.
QuotientMetric quotient_pseudometric(const FiniteSpace& space,
                                     const std::vector<std::string>& fiber_map,
                                     QuotientVariant variant);

// Points reachable from p by words of length <= k (the identity included).
std::vector<PointSet> schreier_balls(const GroupAction& action, std::size_t k);

}  // namespace coarselab
