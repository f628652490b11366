#include "coarselab/metrics.hpp"

#include <algorithm>
#include <map>

#include "coarselab/errors.hpp"
#include "coarselab/graph.hpp"
#include "coarselab/parallel.hpp"
#include "coarselab/union_find.hpp"

namespace coarselab {
namespace {

void symmetrize_min(DistanceMatrix& d) {
  for (PointIndex i = 0; i < d.size(); ++i) {
    for (PointIndex j = i + 1; j < d.size(); ++j) {
      const double m = std::min(d(i, j), d(j, i));
      d(i, j) = d(j, i) = m;
    }
  }
}

double largest_finite(const DistanceMatrix& d, bool& has_infinite) {
  double m = 0.0;
  has_infinite = false;
  const std::size_t n = d.size();
  for (PointIndex i = 0; i < n; ++i) {
    for (double v : d.row(i)) {
      if (v == kInfinity) {
        has_infinite = true;
      } else {
        m = std::max(m, v);
      }
    }
  }
  return m;
}

FiniteSpace isometric_xg(const GroupAction& action) {
  const FiniteSpace& s = action.space();
  const std::size_t n = s.size();
  DistanceMatrix best = s.distances();  // g = e
  ElementEnumerator en(action);
  bool has_inf = false;
  double bound = largest_finite(best, has_inf);
  while (en.advance()) {
    const double len = static_cast<double>(en.current_length());
    // Every candidate from this layer on costs at least len.
    if (!has_inf && len >= bound) break;
    for (const auto& g : en.layer()) {
      parallel_for(n, [&](std::size_t x) {
        auto row = best.row(x);
        auto dx = s.distances().row(x);
        for (PointIndex y = 0; y < n; ++y) {
          if (row[y] <= len) continue;
          const double cand = dx[g(y)] + len;
          if (cand < row[y]) row[y] = cand;
        }
      });
    }
    bound = largest_finite(best, has_inf);
  }
  symmetrize_min(best);
  const double radius = covering_radius(best, s.basepoint(), s.core());
  return FiniteSpace(s.labels(), std::move(best), s.basepoint(), radius);
}

FiniteSpace general_xg(const GroupAction& action) {
  const FiniteSpace& s = action.space();
  const std::size_t n = s.size();
  const auto ball2 = schreier_balls(action, 2);
  const auto ball4 = schreier_balls(action, 4);
  DistanceMatrix out(n);
  parallel_for(n, [&](std::size_t x) {
    // Nodes [0, n) are chain starts a_i, [n, 2n) are chain ends b_i.
    std::vector<double> dist(2 * n, kInfinity);
    std::vector<bool> done(2 * n, false);
    for (PointIndex a : ball2[x]) dist[a] = 0.0;
    while (true) {
      std::size_t u = 2 * n;
      double du = kInfinity;
      for (std::size_t v = 0; v < 2 * n; ++v) {
        if (!done[v] && dist[v] < du) {
          du = dist[v];
          u = v;
        }
      }
      if (u == 2 * n) break;
      done[u] = true;
      if (u < n) {
        auto row = s.distances().row(u);
        for (PointIndex q = 0; q < n; ++q) {
          const double c = du + 1.0 + row[q];
          if (c < dist[n + q]) dist[n + q] = c;
        }
      } else {
        for (PointIndex r : ball4[u - n]) {
          if (du < dist[r]) dist[r] = du;
        }
      }
    }
    auto row = out.row(x);
    for (PointIndex y = 0; y < n; ++y) {
      if (y == x) {
        row[y] = 0.0;
        continue;
      }
      double m = kInfinity;
      for (PointIndex b : ball2[y]) m = std::min(m, dist[n + b]);
      row[y] = m;
    }
  });
  symmetrize_min(out);
  const double radius = covering_radius(out, s.basepoint(), s.core());
  return FiniteSpace(s.labels(), std::move(out), s.basepoint(), radius);
}

double directed_hausdorff(const FiniteSpace& s, const PointSet& a, const PointSet& b) {
  double sup = 0.0;
  for (PointIndex p : a) {
    double inf = kInfinity;
    for (PointIndex q : b) inf = std::min(inf, s.dist(p, q));
    sup = std::max(sup, inf);
  }
  return sup;
}

}  // namespace

std::vector<PointSet> schreier_balls(const GroupAction& action, std::size_t k) {
  const std::size_t n = action.space().size();
  std::vector<PointSet> balls(n);
  parallel_for(n, [&](std::size_t p) {
    std::vector<bool> seen(n, false);
    PointSet frontier{p};
    PointSet all{p};
    seen[p] = true;
    for (std::size_t step = 0; step < k && !frontier.empty(); ++step) {
      PointSet next;
      for (PointIndex q : frontier) {
        for (const auto& gen : action.generators()) {
          const PointIndex r = gen.perm[q];
          if (!seen[r]) {
            seen[r] = true;
            next.push_back(r);
            all.push_back(r);
          }
        }
      }
      frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    balls[p] = std::move(all);
  });
  return balls;
}

FiniteSpace xg_metric(const GroupAction& action, XgMode mode) {
  if (mode == XgMode::isometric) {
    if (!action.is_isometric()) {
      for (const auto& g : action.generators()) {
        if (g.control > kTolerance) {
          throw ModeError("mode: generator '" + g.symbol +
                          "' is not an isometry; use the general mode");
        }
      }
    }
    return isometric_xg(action);
  }
  return general_xg(action);
}

OrbitMetric orbit_metric(const GroupAction& action, OrbitMetricKind kind, std::size_t cap) {
  const FiniteSpace& s = action.space();
  const std::size_t n = s.size();
  if (kind == OrbitMetricKind::min && !action.is_isometric()) {
    throw ModeError("kind: the min orbit metric requires an isometric action");
  }
  const GroupClosure group = enumerate_group(action, cap);

  UnionFind uf(n);
  for (const auto& gen : action.generators()) {
    for (PointIndex x = 0; x < n; ++x) uf.unite(x, gen.perm[x]);
  }
  std::vector<std::size_t> orbit_of(n, n);
  std::vector<PointSet> orbits;
  std::vector<std::size_t> root_slot(n, n);
  for (PointIndex x = 0; x < n; ++x) {
    const std::size_t r = uf.find(x);
    if (root_slot[r] == n) {
      root_slot[r] = orbits.size();
      orbits.emplace_back();
    }
    orbit_of[x] = root_slot[r];
    orbits[root_slot[r]].push_back(x);
  }

  const std::size_t m = orbits.size();
  DistanceMatrix d(m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      double v = 0.0;
      switch (kind) {
        case OrbitMetricKind::hausdorff:
          v = std::min(directed_hausdorff(s, orbits[i], orbits[j]),
                       directed_hausdorff(s, orbits[j], orbits[i]));
          break;
        case OrbitMetricKind::hausdorff_classical:
          v = std::max(directed_hausdorff(s, orbits[i], orbits[j]),
                       directed_hausdorff(s, orbits[j], orbits[i]));
          break;
        case OrbitMetricKind::min: {
          v = kInfinity;
          const PointIndex x = orbits[i].front();
          const PointIndex y = orbits[j].front();
          for (const auto& g : group.elements) v = std::min(v, s.dist(x, g(y)));
          break;
        }
      }
      d(i, j) = v;
    }
  });
  symmetrize_min(d);

  std::vector<std::string> labels;
  labels.reserve(m);
  for (const auto& o : orbits) labels.push_back(s.label(o.front()));
  std::vector<PointIndex> core_orbits;
  for (PointIndex c : s.core()) core_orbits.push_back(orbit_of[c]);
  const PointIndex base = orbit_of[s.basepoint()];
  const double radius = covering_radius(d, base, core_orbits);
  return OrbitMetric{std::move(orbits), FiniteSpace(std::move(labels), std::move(d), base, radius)};
}

QuotientMetric quotient_pseudometric(const FiniteSpace& space,
                                     const std::vector<std::string>& fiber_map,
                                     QuotientVariant variant) {
  const std::size_t n = space.size();
  if (fiber_map.size() != n) {
    throw MalformedError("fiber_map: must assign a fiber to every point");
  }
  QuotientMetric out{{}, std::vector<PointIndex>(n), FiniteSpace({"_"}, DistanceMatrix(1, 0.0), 0, 0.0)};
  std::map<std::string, PointIndex> slot;
  for (PointIndex x = 0; x < n; ++x) {
    auto [it, inserted] = slot.emplace(fiber_map[x], out.fiber_labels.size());
    if (inserted) out.fiber_labels.push_back(fiber_map[x]);
    out.fiber_of[x] = it->second;
  }
  const std::size_t m = out.fiber_labels.size();
  // Cheapest single link between fibers; optimal chains pick their links
  // independently because consecutive links only share a fiber.
  DistanceMatrix link(m);
  for (PointIndex x = 0; x < n; ++x) {
    auto row = space.distances().row(x);
    const PointIndex fx = out.fiber_of[x];
    for (PointIndex y = 0; y < n; ++y) {
      const PointIndex fy = out.fiber_of[y];
      if (row[y] < link(fx, fy)) link(fx, fy) = row[y];
    }
  }
  for (PointIndex i = 0; i < m; ++i) {
    for (PointIndex j = 0; j < m; ++j) {
      if (i == j) {
        link(i, j) = 0.0;
      } else if (variant == QuotientVariant::chain) {
        link(i, j) += 1.0;
      }
    }
  }
  DistanceMatrix d = metric_closure(link);
  std::vector<PointIndex> core_fibers;
  for (PointIndex c : space.core()) core_fibers.push_back(out.fiber_of[c]);
  const PointIndex base = out.fiber_of[space.basepoint()];
  const double radius = covering_radius(d, base, core_fibers);
  out.metric = FiniteSpace(out.fiber_labels, std::move(d), base, radius);
  return out;
}

}  // namespace coarselab
