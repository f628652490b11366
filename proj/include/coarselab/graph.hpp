#pragma once

#include <cstddef>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

struct WeightedEdge {
  PointIndex a;
  PointIndex b;
  double weight;
};

// All-pairs shortest paths over an undirected sparse graph (Dijkstra from
// every source). Unreachable pairs stay at infinity.
DistanceMatrix graph_distances(std::size_t n, const std::vector<WeightedEdge>& edges);

// All-pairs shortest paths over the complete graph whose edge weights are
// given by `weights` (infinity = no edge). Dense O(n^2) Dijkstra per source.
DistanceMatrix metric_closure(const DistanceMatrix& weights);

}  // namespace coarselab
