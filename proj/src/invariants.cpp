#include "coarselab/invariants.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "coarselab/errors.hpp"
#include "coarselab/parallel.hpp"

namespace coarselab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_on_window:
      return "holds_on_window";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

BallSet enclosing_ball(const FiniteSpace& s, std::span<const PointIndex> points) {
  BallSet out;
  for (PointIndex p : points) out.radius = std::max(out.radius, s.dist(s.basepoint(), p));
  if (out.radius < 0.0) return out;
  for (PointIndex p = 0; p < s.size(); ++p) {
    if (s.dist(s.basepoint(), p) <= out.radius) out.points.push_back(p);
  }
  return out;
}

DiscontinuityReport discontinuity_profile(const GroupAction& action, const GroupElement& g,
                                          std::span<const double> radii) {
  const FiniteSpace& s = action.space();
  if (g == action.identity()) {
    throw PreconditionError("element: must differ from the identity on the core");
  }
  const PointIndex o = s.basepoint();
  std::vector<double> displacement(s.size());
  for (PointIndex x = 0; x < s.size(); ++x) displacement[x] = s.dist(x, g(x));

  DiscontinuityReport report;
  std::vector<double> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double r : sorted) {
    double m = kInfinity;
    bool any = false;
    for (PointIndex x : s.core()) {
      if (s.dist(o, x) >= r) {
        any = true;
        m = std::min(m, displacement[x]);
      }
    }
    if (any) report.profile.push_back({r, m});
  }

  for (double r : radii) {
    if (r < 0.0) throw ParameterError("radii: must be nonnegative");
    DiscontinuityResult res{r, {}, s.window_radius() - r, Verdict::holds_on_window, std::nullopt};
    double worst = -1.0;
    bool core_violation = false;
    for (PointIndex x = 0; x < s.size(); ++x) {
      if (!(displacement[x] < r)) continue;
      res.k.push_back(x);
      const double dx = s.dist(o, x);
      if (dx > res.allowed_radius + kTolerance) {
        const bool in_core = s.in_core(x);
        // Prefer a violation inside the core; among those the farthest.
        if ((in_core && !core_violation) || (in_core == core_violation && dx > worst)) {
          worst = dx;
          res.counterexample = x;
          core_violation = core_violation || in_core;
        }
      }
    }
    if (res.counterexample) res.verdict = core_violation ? Verdict::fails : Verdict::inconclusive;
    report.results.push_back(std::move(res));
  }
  return report;
}

namespace {

std::vector<GroupElement> dedupe_shortlex(std::vector<GroupElement> elements) {
  std::stable_sort(elements.begin(), elements.end(), [](const GroupElement& a, const GroupElement& b) {
    return shortlex_less(a.word(), b.word());
  });
  std::vector<GroupElement> out;
  for (auto& g : elements) {
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<GroupElement> difference_set(const GroupAction& action,
                                         std::span<const GroupElement> elements) {
  std::vector<GroupElement> all;
  for (const auto& a : elements) {
    for (const auto& b : elements) all.push_back(action.compose(a, action.inverse(b)));
  }
  return dedupe_shortlex(std::move(all));
}

SeparationResult separation_bound(const GroupAction& action, std::span<const GroupElement> elements,
                                  const Family& u, const Family& v) {
  const FiniteSpace& s = action.space();
  const std::size_t n = s.size();
  if (u.universe() != n || v.universe() != n) {
    throw MalformedError("family: universe does not match the space");
  }
  SeparationResult out{{}, Verdict::holds_on_window, std::nullopt,
                       dedupe_shortlex({elements.begin(), elements.end()})};
  const auto& fs = out.elements;
  const CoMembership near_u(u);
  const CoMembership near_v(v);
  const PointIndex o = s.basepoint();

  // Per x: farthest violating configuration with x as first point.
  std::vector<std::optional<SeparationResult::Violation>> best(n);
  std::vector<double> reach(n, -1.0);
  parallel_for(n, [&](std::size_t x) {
    for (PointIndex y = 0; y < n; ++y) {
      if (!near_u.together(x, y)) continue;
      const double r = std::max(s.dist(o, x), s.dist(o, y));
      if (r <= reach[x]) continue;
      for (std::size_t i = 0; i < fs.size() && r > reach[x]; ++i) {
        for (std::size_t j = 0; j < fs.size(); ++j) {
          if (i == j) continue;
          if (near_v.together(fs[i](x), fs[j](y))) {
            reach[x] = r;
            best[x] = SeparationResult::Violation{x, y, i, j};
            break;
          }
        }
      }
    }
  });
  std::vector<PointIndex> involved;
  double far = -1.0;
  for (PointIndex x = 0; x < n; ++x) {
    if (!best[x]) continue;
    involved.push_back(best[x]->x);
    involved.push_back(best[x]->y);
    if (reach[x] > far) {
      far = reach[x];
      out.farthest = best[x];
    }
  }
  out.k = enclosing_ball(s, involved);
  if (!out.farthest) return out;
  if (out.k.radius + mesh(u, s) <= s.window_radius() + kTolerance) {
    out.verdict = Verdict::holds_on_window;
  } else if (s.in_core(out.farthest->x) && s.in_core(out.farthest->y)) {
    out.verdict = Verdict::fails;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

namespace {

// Candidate hole radii >= r: r itself and every basepoint distance above it.
std::vector<double> hole_candidates(const FiniteSpace& s, std::span<const PointIndex> pts, double r) {
  std::vector<double> c{r};
  for (PointIndex p : pts) {
    const double d = s.dist(s.basepoint(), p);
    if (d > r && d != kInfinity) c.push_back(d);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

PointSet outside_ball(const FiniteSpace& s, std::span<const PointIndex> pts, double r) {
  PointSet out;
  for (PointIndex p : pts) {
    if (s.dist(s.basepoint(), p) > r) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<OneEndedResult> one_ended_check(const FiniteSpace& s, const Family& u,
                                            std::span<const double> hole_radii) {
  if (u.universe() != s.size()) throw MalformedError("u: universe does not match the space");
  const double margin = mesh(u, s);
  std::vector<OneEndedResult> out;
  for (double r : hole_radii) {
    OneEndedResult res{r, Verdict::inconclusive, std::nullopt, 0, std::nullopt};
    bool first = true;
    bool saw_complement = false;
    for (double rp : hole_candidates(s, s.core(), r)) {
      const PointSet rest = outside_ball(s, s.core(), rp);
      if (rest.empty()) break;
      saw_complement = true;
      const auto comps = u_components(rest, u);
      if (first) {
        res.components = comps.size();
        if (comps.size() > 1) res.counterexample = std::make_pair(comps[0].front(), comps[1].front());
        first = false;
      }
      if (comps.size() == 1) {
        res.connected_from = rp;
        res.verdict = rp + margin <= s.window_radius() + kTolerance ? Verdict::holds_on_window
                                                                    : Verdict::inconclusive;
        break;
      }
    }
    if (saw_complement && !res.connected_from) res.verdict = Verdict::fails;
    if (res.connected_from) res.counterexample.reset();
    out.push_back(std::move(res));
  }
  return out;
}

LightnessResult coarsely_light_check(const FiniteSpace& domain, std::span<const PointIndex> f,
                                     const Family& u, const Family& v) {
  const std::size_t n = domain.size();
  if (f.size() != n) throw MalformedError("map: must assign an image to every point");
  if (u.universe() != n) throw MalformedError("u: universe does not match the domain");
  const std::size_t m = v.universe();
  std::vector<PointSet> fibers(m);
  for (PointIndex x = 0; x < n; ++x) {
    if (f[x] >= m) throw MalformedError("map: image outside the codomain");
    fibers[f[x]].push_back(x);
  }
  std::vector<PointSet> preimages;
  std::vector<bool> covered(m, false);
  for (const auto& member : v.members()) {
    PointSet pre;
    for (PointIndex y : member) {
      covered[y] = true;
      pre.insert(pre.end(), fibers[y].begin(), fibers[y].end());
    }
    std::sort(pre.begin(), pre.end());
    if (!pre.empty()) preimages.push_back(std::move(pre));
  }
  for (PointIndex y = 0; y < m; ++y) {
    if (!covered[y] && !fibers[y].empty()) preimages.push_back(fibers[y]);
  }
  LightnessResult out;
  for (const auto& pre : preimages) {
    for (const auto& comp : u_components(pre, u)) {
      const double d = domain.diameter(comp);
      if (d > out.max_diameter || out.worst_component.empty()) {
        out.max_diameter = std::max(out.max_diameter, d);
        if (d >= out.max_diameter) out.worst_component = comp;
      }
    }
  }
  return out;
}

Verdict lightness_growth(std::span<const LightnessResult> windows) {
  if (windows.size() < 2) return Verdict::inconclusive;
  return windows.back().max_diameter > windows.front().max_diameter + kTolerance
             ? Verdict::fails
             : Verdict::holds_on_window;
}

namespace {

struct ChainSearch {
  const FiniteSpace& x;
  const FiniteSpace& y;
  std::span<const PointIndex> f;
  double t;

  // Fewest links from y0 to every codomain point under link bound s.
  // Nodes [0, n) are chain starts a_i, [n, 2n) chain ends b_i.
  struct Tree {
    std::vector<std::size_t> dist;
    std::vector<std::size_t> parent;
  };

  Tree search(PointIndex y0, double s) const {
    const std::size_t n = x.size();
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    Tree tree{std::vector<std::size_t>(2 * n, none), std::vector<std::size_t>(2 * n, none)};
    std::deque<std::size_t> queue;
    for (PointIndex a = 0; a < n; ++a) {
      if (y.dist(f[a], y0) <= t + kTolerance) {
        tree.dist[a] = 0;
        queue.push_back(a);
      }
    }
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      const std::size_t dn = tree.dist[node];
      if (node < n) {
        for (PointIndex b = 0; b < n; ++b) {
          if (x.dist(node, b) <= s + kTolerance && tree.dist[n + b] > dn + 1) {
            tree.dist[n + b] = dn + 1;
            tree.parent[n + b] = node;
            queue.push_back(n + b);
          }
        }
      } else {
        const PointIndex b = node - n;
        for (PointIndex a = 0; a < n; ++a) {
          if (y.dist(f[b], f[a]) <= t + kTolerance && tree.dist[a] > dn) {
            tree.dist[a] = dn;
            tree.parent[a] = node;
            queue.push_front(a);
          }
        }
      }
    }
    return tree;
  }

  // Fewest links ending near y1, with the end node.
  std::pair<std::size_t, std::size_t> best_end(const Tree& tree, PointIndex y1) const {
    const std::size_t n = x.size();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::size_t node = 0;
    for (PointIndex b = 0; b < n; ++b) {
      if (y.dist(f[b], y1) <= t + kTolerance && tree.dist[n + b] < best) {
        best = tree.dist[n + b];
        node = n + b;
      }
    }
    return {best, node};
  }

  std::vector<ChainLink> unwind(const Tree& tree, std::size_t node) const {
    const std::size_t n = x.size();
    std::vector<ChainLink> links;
    while (node != std::numeric_limits<std::size_t>::max() && node >= n) {
      const std::size_t a = tree.parent[node];
      links.push_back({a, node - n});
      node = tree.parent[a];
    }
    std::reverse(links.begin(), links.end());
    return links;
  }
};

struct Worst {
  bool present = false;  // some core pair lies within R
  std::size_t n = 0;
  PointIndex y = 0, y2 = 0;
  std::vector<ChainLink> chain;
};

}  // namespace

WeakQuotientResult weak_quotient_certificate(const FiniteSpace& x, const FiniteSpace& y,
                                             std::span<const PointIndex> f, double t,
                                             std::span<const double> radii, std::size_t n_budget,
                                             double s_budget) {
  if (f.size() != x.size()) throw MalformedError("map: must assign an image to every point");
  for (PointIndex p : f) {
    if (p >= y.size()) throw MalformedError("map: image outside the codomain");
  }
  if (t < 0.0) throw ParameterError("T: must be nonnegative");
  if (n_budget < 1) throw ParameterError("n_budget: must be at least 1");
  if (s_budget < 0.0) throw ParameterError("S_budget: must be nonnegative");

  WeakQuotientResult out;
  // Coarse surjectivity on the core of Y.
  double worst_gap = -1.0;
  for (PointIndex q : y.core()) {
    double gap = kInfinity;
    for (PointIndex p = 0; p < x.size(); ++p) gap = std::min(gap, y.dist(f[p], q));
    if (gap > t + kTolerance && gap > worst_gap) {
      worst_gap = gap;
      out.uncovered = q;
    }
  }
  if (out.uncovered) {
    out.verdict = Verdict::fails;
    return out;
  }

  const ChainSearch search{x, y, f, t};
  std::vector<double> s_values{0.0};
  for (PointIndex p = 0; p < x.size(); ++p) {
    for (double d : x.distances().row(p)) {
      if (d <= s_budget) s_values.push_back(d);
    }
  }
  s_values.push_back(s_budget);
  std::sort(s_values.begin(), s_values.end());
  s_values.erase(std::unique(s_values.begin(), s_values.end()), s_values.end());

  const auto& core = y.core();
  // Largest required link count over core pairs within R, at link bound s.
  auto evaluate = [&](double r, double s) {
    std::vector<Worst> per(core.size());
    parallel_for(core.size(), [&](std::size_t i) {
      const auto tree = search.search(core[i], s);
      for (PointIndex q : core) {
        if (y.dist(core[i], q) > r + kTolerance) continue;
        const auto [links, node] = search.best_end(tree, q);
        if (!per[i].present || links > per[i].n) {
          per[i].present = true;
          per[i].n = links;
          per[i].y = core[i];
          per[i].y2 = q;
          per[i].chain = links == std::numeric_limits<std::size_t>::max()
                             ? std::vector<ChainLink>{}
                             : search.unwind(tree, node);
        }
      }
    });
    Worst w;
    for (auto& p : per) {
      if (p.present && (!w.present || p.n > w.n)) w = std::move(p);
    }
    return w;
  };

  for (double r : radii) {
    if (r < 0.0) throw ParameterError("radii: must be nonnegative");
    const Worst at_budget = evaluate(r, s_values.back());
    if (!at_budget.present) continue;
    if (at_budget.n > n_budget) {
      out.verdict = Verdict::fails;
      out.failing_pair = std::make_pair(at_budget.y, at_budget.y2);
      out.failing_radius = r;
      return out;
    }
    std::size_t lo = 0, hi = s_values.size() - 1;
    Worst chosen = at_budget;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      Worst w = evaluate(r, s_values[mid]);
      if (w.n <= at_budget.n) {
        hi = mid;
        chosen = std::move(w);
      } else {
        lo = mid + 1;
      }
    }
    if (lo == s_values.size() - 1) chosen = at_budget;
    out.rows.push_back({r, chosen.n, s_values[lo], chosen.y, chosen.y2, std::move(chosen.chain)});
  }
  return out;
}

IdentifyResult identify_group_element(std::span<const PointIndex> f, const GroupAction& action,
                                      const Family& v, std::span<const GroupElement> elements,
                                      const Family& u) {
  const FiniteSpace& s = action.space();
  const std::size_t n = s.size();
  if (f.size() != n) throw MalformedError("map: must assign an image to every point");
  for (PointIndex p : f) {
    if (p >= n) throw MalformedError("map: image outside the window");
  }
  if (elements.empty()) throw ParameterError("elements: F must not be empty");
  const auto diffs = difference_set(action, elements);

  Family coarse;
  for (const auto& h : diffs) {
    Family moved = image(v, h.realized(), n);
    coarse = coarse.universe() == 0 ? moved : family_union(coarse, moved);
  }
  const CoMembership near(coarse);

  // alpha(x) as a bitmask over diffs.
  std::vector<std::vector<bool>> alpha(n, std::vector<bool>(diffs.size(), false));
  for (PointIndex x = 0; x < n; ++x) {
    bool any = false;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      if (near.together(diffs[i](x), f[x])) {
        alpha[x][i] = true;
        any = true;
      }
    }
    if (!any) {
      throw PreconditionError("map: image of '" + s.label(x) +
                              "' is not within the closeness witness");
    }
  }

  IdentifyResult out;
  const Family target = star(image(u, f, n), coarse);
  const SeparationResult sep = separation_bound(action, diffs, u, target);
  out.k = sep.k;

  std::vector<PointIndex> all(n);
  std::iota(all.begin(), all.end(), PointIndex{0});
  std::vector<PointSet> comps;
  out.one_ended = Verdict::fails;
  for (double rp : hole_candidates(s, all, out.k.radius)) {
    PointSet rest = outside_ball(s, all, rp);
    if (rest.empty()) break;
    auto c = u_components(rest, u);
    if (comps.empty()) comps = c;
    if (c.size() == 1) {
      comps = std::move(c);
      out.one_ended = Verdict::holds_on_window;
      std::vector<PointIndex> inner;
      for (PointIndex p = 0; p < n; ++p) {
        if (s.dist(s.basepoint(), p) <= rp) inner.push_back(p);
      }
      out.k_prime = BallSet{inner, inner.empty() ? -1.0 : rp};
      break;
    }
  }
  if (out.one_ended != Verdict::holds_on_window) out.k_prime = out.k;
  out.components = comps.size();

  std::vector<bool> common(diffs.size(), !comps.empty());
  for (const auto& comp : comps) {
    for (PointIndex x : comp) {
      for (std::size_t i = 0; i < diffs.size(); ++i) common[i] = common[i] && alpha[x][i];
    }
  }
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (common[i]) out.candidates.push_back(diffs[i]);
  }
  out.unique = out.candidates.size() == 1;
  if (!out.candidates.empty()) {
    out.element = out.candidates.front();
    for (PointIndex x : s.core()) {
      if (f[x] != (*out.element)(x)) out.exceptional.push_back(x);
    }
  }
  return out;
}

}  // namespace coarselab
