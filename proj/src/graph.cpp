#include "coarselab/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <utility>

#include "coarselab/errors.hpp"
#include "coarselab/parallel.hpp"

namespace coarselab {
namespace {

// Shortest-path sums can differ in the last bit depending on direction.
void symmetrize(DistanceMatrix& d) {
  for (PointIndex i = 0; i < d.size(); ++i) {
    for (PointIndex j = i + 1; j < d.size(); ++j) {
      const double m = std::min(d(i, j), d(j, i));
      d(i, j) = d(j, i) = m;
    }
  }
}

}  // namespace

DistanceMatrix graph_distances(std::size_t n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<std::pair<PointIndex, double>>> adj(n);
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n) throw MalformedError("edges: endpoint out of range");
    if (!(e.weight >= 0.0)) throw MalformedError("edges: weights must be nonnegative");
    adj[e.a].emplace_back(e.b, e.weight);
    adj[e.b].emplace_back(e.a, e.weight);
  }
  DistanceMatrix out(n);
  parallel_for(n, [&](std::size_t src) {
    auto row = out.row(src);
    using Item = std::pair<double, PointIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[src] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > row[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (d + w < row[v]) {
          row[v] = d + w;
          heap.emplace(row[v], v);
        }
      }
    }
  });
  symmetrize(out);
  return out;
}

DistanceMatrix metric_closure(const DistanceMatrix& weights) {
  const std::size_t n = weights.size();
  DistanceMatrix out(n);
  parallel_for(n, [&](std::size_t src) {
    auto row = out.row(src);
    std::vector<bool> done(n, false);
    row[src] = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
      PointIndex u = n;
      double best = kInfinity;
      for (PointIndex v = 0; v < n; ++v) {
        if (!done[v] && row[v] < best) {
          best = row[v];
          u = v;
        }
      }
      if (u == n) break;
      done[u] = true;
      auto wu = weights.row(u);
      for (PointIndex v = 0; v < n; ++v) {
        if (!done[v] && best + wu[v] < row[v]) row[v] = best + wu[v];
      }
    }
  });
  symmetrize(out);
  return out;
}

}  // namespace coarselab
