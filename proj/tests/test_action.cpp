#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <deque>

#include "coarselab/action.hpp"
#include "coarselab/errors.hpp"
#include "coarselab/graph.hpp"
#include "coarselab/metrics.hpp"
#include "coarselab/spacegen.hpp"
#include "support.hpp"

using namespace coarselab;
using testing::at;

namespace {

std::shared_ptr<const FiniteSpace> cycle(std::size_t n) {
  std::vector<WeightedEdge> e;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    e.push_back({i, (i + 1) % n, 1.0});
    labels.push_back(std::to_string(i));
  }
  return std::make_shared<const FiniteSpace>(labels, graph_distances(n, e), 0, static_cast<double>(n / 2));
}

Permutation rotation(std::size_t n, std::size_t k) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = (i + k) % n;
  return p;
}

Permutation reflection(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = (n - i) % n;
  return p;
}

// Points reachable from x by at most k generator steps, by plain BFS.
std::vector<bool> word_ball(const GroupAction& a, PointIndex x, std::size_t k) {
  const std::size_t n = a.space().size();
  std::vector<std::size_t> depth(n, SIZE_MAX);
  std::deque<PointIndex> q{x};
  depth[x] = 0;
  while (!q.empty()) {
    const PointIndex p = q.front();
    q.pop_front();
    if (depth[p] == k) continue;
    for (const auto& g : a.generators()) {
      const PointIndex r = g.perm[p];
      if (depth[r] == SIZE_MAX) {
        depth[r] = depth[p] + 1;
        q.push_back(r);
      }
    }
  }
  std::vector<bool> in(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = depth[i] != SIZE_MAX;
  return in;
}

// inf over the finite group of d(x, g.x') + |g|, from the full closure.
DistanceMatrix xg_isometric_oracle(const GroupAction& a) {
  const auto closure = enumerate_group(a);
  const auto& s = a.space();
  DistanceMatrix d(s.size());
  for (PointIndex x = 0; x < s.size(); ++x)
    for (PointIndex y = 0; y < s.size(); ++y)
      for (std::size_t i = 0; i < closure.elements.size(); ++i)
        d(x, y) = std::min(d(x, y), s.dist(x, closure.elements[i](y)) + static_cast<double>(closure.lengths[i]));
  return d;
}

// Chains a_1 b_1 ... a_n b_n priced n + sum d(a_i, b_i) on a doubled graph:
// in-node a -> out-node b costs 1 + d(a, b); out-node b -> in-node a' is
// free when a' lies in the 4-ball of b.
DistanceMatrix xg_general_oracle(const GroupAction& a) {
  const auto& s = a.space();
  const std::size_t n = s.size();
  DistanceMatrix g(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) g(i, i) = 0;
  for (PointIndex x = 0; x < n; ++x) {
    for (PointIndex y = 0; y < n; ++y) g(x, n + y) = 1 + s.dist(x, y);
    const auto b4 = word_ball(a, x, 4);
    for (PointIndex y = 0; y < n; ++y)
      if (b4[y]) g(n + x, y) = 0;
  }
  for (std::size_t k = 0; k < 2 * n; ++k)
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) g(i, j) = std::min(g(i, j), g(i, k) + g(k, j));
  DistanceMatrix d(n);
  std::vector<std::vector<bool>> b2;
  for (PointIndex x = 0; x < n; ++x) b2.push_back(word_ball(a, x, 2));
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) {
      if (x == y) {
        d(x, y) = 0;
        continue;
      }
      for (PointIndex p = 0; p < n; ++p)
        for (PointIndex q = 0; q < n; ++q)
          if (b2[x][p] && b2[y][q]) d(x, y) = std::min(d(x, y), g(p, n + q));
    }
  return d;
}

// Fiber-level closure of min link weights, with or without the +1 per link.
DistanceMatrix quotient_oracle(const FiniteSpace& s, const std::vector<std::size_t>& fiber, std::size_t m,
                               double step) {
  DistanceMatrix d(m);
  for (std::size_t i = 0; i < m; ++i) d(i, i) = 0;
  for (PointIndex x = 0; x < s.size(); ++x)
    for (PointIndex y = 0; y < s.size(); ++y)
      if (fiber[x] != fiber[y]) d(fiber[x], fiber[y]) = std::min(d(fiber[x], fiber[y]), step + s.dist(x, y));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}

std::vector<std::string> mod_fibers(const FiniteSpace& s, std::int64_t m) {
  std::vector<std::string> out;
  for (PointIndex x = 0; x < s.size(); ++x) {
    const std::int64_t v = std::atoll(s.label(x).c_str());
    out.push_back(std::to_string(((v % m) + m) % m));
  }
  return out;
}

GroupAction random_action(std::mt19937_64& g, std::shared_ptr<const FiniteSpace> s, std::size_t gens) {
  std::vector<std::pair<std::string, Permutation>> tables;
  for (std::size_t i = 0; i < gens; ++i)
    tables.emplace_back("s" + std::to_string(i), testing::random_permutation(g, s->size()));
  return GroupAction(std::move(s), std::move(tables));
}

}  // namespace

TEST_CASE("action validation and inverse closure") {
  const auto s = testing::segment(0, 3);
  CHECK_THROWS_AS(GroupAction(s, {{"a", {0, 1, 2}}}), MalformedError);
  CHECK_THROWS_AS(GroupAction(s, {{"a", {0, 0, 2, 3}}}), MalformedError);
  CHECK_THROWS_AS(GroupAction(s, {{"a", {1, 2, 3, 0}}, {"b", {1, 2, 3, 0}}}, {{"a", "b"}}), MalformedError);
  const GroupAction a(s, {{"a", {1, 2, 3, 0}}});
  REQUIRE(a.generators().size() == 2);
  const auto inv = a.find_generator("a^-1");
  REQUIRE(inv.has_value());
  CHECK(a.generators()[*inv].perm == Permutation{3, 0, 1, 2});
  CHECK(a.compose(a.parse_element("a"), a.parse_element("a^-1")) == a.identity());
  CHECK(a.parse_element("a.a").to_string() == "a.a");
  CHECK(a.identity().to_string() == "e");
  CHECK_THROWS_AS(a.parse_element("b"), MalformedError);
  // A swap is its own inverse.
  const GroupAction t(s, {{"t", {1, 0, 2, 3}}});
  CHECK(t.generators().size() == 1);
  CHECK(t.generators()[0].inverse == "t");
  CHECK_FALSE(t.is_isometric());
  CHECK(t.generators()[0].control == 1);
}

TEST_CASE("element enumeration and word length") {
  const auto c = cycle(8);
  const GroupAction a(c, {{"r", rotation(8, 1)}, {"f", reflection(8)}});
  const auto closure = enumerate_group(a);
  CHECK(closure.elements.size() == 16);
  CHECK(closure.elements.front() == a.identity());
  for (std::size_t i = 1; i < closure.lengths.size(); ++i) CHECK(closure.lengths[i - 1] <= closure.lengths[i]);
  const auto r4 = a.element({"r", "r", "r", "r"});
  CHECK(word_length(a, r4, 10) == 4);
  CHECK(word_length(a, r4, 3) == std::nullopt);
  CHECK(word_length(a, a.element({"r", "f", "r"}), 10) == 1);
  CHECK_THROWS_AS(enumerate_group(a, 5), NotFiniteError);
}

TEST_CASE("xg metric of negation on a segment") {
  const auto s = testing::segment(-20, 20);
  const FiniteSpace m = xg_metric(negation_action(s), XgMode::isometric);
  for (std::int64_t x = -20; x <= 20; ++x)
    for (std::int64_t y = -20; y <= 20; ++y) {
      const double expected = std::min<double>(std::llabs(x - y), std::llabs(x + y) + 1);
      CHECK(m.dist(at(-20, x), at(-20, y)) == expected);
    }
  CHECK(m.basepoint() == s->basepoint());
  CHECK(m.window_radius() == 20);
}

TEST_CASE("xg isometric mode against closure oracle") {
  const auto c = cycle(12);
  const GroupAction a(c, {{"r", rotation(12, 3)}, {"f", reflection(12)}});
  const FiniteSpace m = xg_metric(a, XgMode::isometric);
  const DistanceMatrix o = xg_isometric_oracle(a);
  for (PointIndex x = 0; x < c->size(); ++x)
    for (PointIndex y = 0; y < c->size(); ++y) CHECK(m.dist(x, y) == o(x, y));
  CHECK(check_metric_axioms(m).ok);
  CHECK_THROWS_AS(xg_metric(translation_action(testing::segment(-4, 4)), XgMode::isometric), ModeError);
}

TEST_CASE("xg general mode against chain oracle") {
  auto g = testing::rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const auto s = testing::segment(-6, 6);
    const GroupAction a = random_action(g, s, 1 + trial % 2);
    const FiniteSpace m = xg_metric(a, XgMode::general);
    const DistanceMatrix o = xg_general_oracle(a);
    for (PointIndex x = 0; x < s->size(); ++x)
      for (PointIndex y = 0; y < s->size(); ++y) CHECK(m.dist(x, y) == doctest::Approx(o(x, y)));
    CHECK(testing::symmetric_with_zero_diagonal(m));
    CHECK(testing::worst_triangle_excess(m) <= 1e-9);
  }
}

TEST_CASE("xg metric is bounded by the space metric") {
  auto g = testing::rng(12);
  const auto s = testing::segment(-15, 15);
  const FiniteSpace iso = xg_metric(negation_action(s), XgMode::isometric);
  const FiniteSpace gen = xg_metric(random_action(g, s, 2), XgMode::general);
  for (PointIndex x = 0; x < s->size(); ++x)
    for (PointIndex y = 0; y < s->size(); ++y) {
      CHECK(iso.dist(x, y) <= s->dist(x, y));
      // The single link (x, y) costs 1 + d(x, y).
      if (x != y) CHECK(gen.dist(x, y) <= s->dist(x, y) + 1);
    }
}

TEST_CASE("adding generators never increases the xg metric") {
  const auto c = cycle(16);
  const GroupAction small(c, {{"r", rotation(16, 4)}});
  const GroupAction big(c, {{"r", rotation(16, 4)}, {"f", reflection(16)}});
  const FiniteSpace ms = xg_metric(small, XgMode::isometric);
  const FiniteSpace mb = xg_metric(big, XgMode::isometric);
  const auto s = testing::segment(-8, 8);
  const FiniteSpace gs = xg_metric(translation_action(s), XgMode::general);
  const GroupAction both(s, {{"+1", translation_action(s).generators()[0].perm},
                             {"gamma", negation_action(s).generators()[0].perm}});
  const FiniteSpace gb = xg_metric(both, XgMode::general);
  for (PointIndex x = 0; x < c->size(); ++x)
    for (PointIndex y = 0; y < c->size(); ++y) CHECK(mb.dist(x, y) <= ms.dist(x, y));
  for (PointIndex x = 0; x < s->size(); ++x)
    for (PointIndex y = 0; y < s->size(); ++y) CHECK(gb.dist(x, y) <= gs.dist(x, y) + 1e-9);
}

TEST_CASE("orbit metrics") {
  const auto s = testing::segment(-5, 5);
  const GroupAction neg = negation_action(s);
  const OrbitMetric h = orbit_metric(neg, OrbitMetricKind::hausdorff);
  REQUIRE(h.orbits.size() == 6);
  CHECK(h.orbits[0] == PointSet{at(-5, -5), at(-5, 5)});
  CHECK(h.metric.label(0) == "-5");
  // Orbit {-k, k} sits at index 5 - k.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(h.metric.dist(i, j) == std::abs(static_cast<double>(i) - j));
  CHECK(orbit_metric(translation_action(s), OrbitMetricKind::hausdorff).orbits.size() == 1);
  CHECK_THROWS_AS(orbit_metric(translation_action(s), OrbitMetricKind::min), ModeError);
  CHECK_THROWS_AS(orbit_metric(translation_action(testing::segment(-60, 60)), OrbitMetricKind::hausdorff, 10),
                  NotFiniteError);
}

TEST_CASE("orbit metric kinds agree for isometric actions") {
  for (std::size_t step : {2u, 3u, 4u}) {
    const auto c = cycle(24);
    const GroupAction a(c, {{"r", rotation(24, step * 2)}, {"f", reflection(24)}});
    const OrbitMetric h = orbit_metric(a, OrbitMetricKind::hausdorff);
    const OrbitMetric hc = orbit_metric(a, OrbitMetricKind::hausdorff_classical);
    const OrbitMetric mn = orbit_metric(a, OrbitMetricKind::min);
    for (const auto* m : {&h, &hc, &mn}) CHECK(check_metric_axioms(m->metric).ok);
    for (PointIndex i = 0; i < h.metric.size(); ++i)
      for (PointIndex j = 0; j < h.metric.size(); ++j) {
        CHECK(h.metric.dist(i, j) == mn.metric.dist(i, j));
        CHECK(hc.metric.dist(i, j) == mn.metric.dist(i, j));
      }
  }
}

TEST_CASE("classical hausdorff is a metric and dominates the min variant") {
  auto g = testing::rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testing::segment(0, 14);
    const GroupAction a = random_action(g, s, 1);
    const OrbitMetric h = orbit_metric(a, OrbitMetricKind::hausdorff);
    const OrbitMetric hc = orbit_metric(a, OrbitMetricKind::hausdorff_classical);
    CHECK(testing::worst_triangle_excess(hc.metric) <= 1e-9);
    CHECK(testing::symmetric_with_zero_diagonal(h.metric));
    for (PointIndex i = 0; i < h.metric.size(); ++i)
      for (PointIndex j = 0; j < h.metric.size(); ++j) CHECK(h.metric.dist(i, j) <= hc.metric.dist(i, j));
  }
}

TEST_CASE("finite group: xg metric within word diameter of the orbit metric") {
  struct Case {
    std::shared_ptr<const FiniteSpace> space;
    GroupAction action;
  };
  const auto seg = testing::segment(-30, 30);
  const auto c = cycle(20);
  std::vector<Case> cases{{seg, negation_action(seg)},
                          {c, GroupAction(c, {{"r", rotation(20, 5)}})},
                          {c, GroupAction(c, {{"r", rotation(20, 4)}, {"f", reflection(20)}})}};
  for (const auto& k : cases) {
    const auto closure = enumerate_group(k.action);
    const double w = static_cast<double>(closure.lengths.back());
    const OrbitMetric om = orbit_metric(k.action, OrbitMetricKind::min);
    const FiniteSpace xg = xg_metric(k.action, XgMode::isometric);
    std::vector<std::size_t> orbit_of(k.space->size());
    for (std::size_t o = 0; o < om.orbits.size(); ++o)
      for (PointIndex p : om.orbits[o]) orbit_of[p] = o;
    for (PointIndex x = 0; x < k.space->size(); ++x)
      for (PointIndex y = 0; y < k.space->size(); ++y) {
        const double dm = om.metric.dist(orbit_of[x], orbit_of[y]);
        CHECK(dm <= xg.dist(x, y));
        CHECK(xg.dist(x, y) <= dm + w);
      }
  }
}

TEST_CASE("quotient pseudometric examples") {
  const auto s = testing::segment(0, 100);
  const auto fibers = mod_fibers(*s, 5);
  const QuotientMetric chain = quotient_pseudometric(*s, fibers, QuotientVariant::chain);
  const QuotientMetric classical = quotient_pseudometric(*s, fibers, QuotientVariant::classical);
  REQUIRE(chain.fiber_labels == std::vector<std::string>{"0", "1", "2", "3", "4"});
  CHECK(chain.metric.dist(0, 1) == 2);
  CHECK(chain.metric.dist(0, 2) == 3);
  CHECK(classical.metric.dist(0, 1) == 1);
  CHECK(classical.metric.dist(0, 2) == 2);
  CHECK(chain.fiber_of[at(0, 37)] == 2);
  CHECK_THROWS_AS(quotient_pseudometric(*s, {"a"}, QuotientVariant::chain), MalformedError);
  // The classical variant can vanish between distinct fibers.
  const auto t = testing::segment(0, 3);
  const QuotientMetric z = quotient_pseudometric(*t, {"a", "b", "a", "c"}, QuotientVariant::classical);
  CHECK(z.metric.dist(0, 1) == 1);
}

TEST_CASE("quotient pseudometrics against fiber closure oracle") {
  auto g = testing::rng(14);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = testing::segment(0, 30);
    const std::size_t m = 2 + g() % 6;
    std::vector<std::size_t> fiber(s->size());
    std::vector<std::string> labels(s->size());
    // Label fibers in first-appearance order so indices line up.
    std::vector<std::size_t> remap(m, SIZE_MAX);
    std::size_t next = 0;
    for (PointIndex x = 0; x < s->size(); ++x) {
      const std::size_t raw = x < m ? x : g() % m;
      if (remap[raw] == SIZE_MAX) remap[raw] = next++;
      fiber[x] = remap[raw];
      labels[x] = "f" + std::to_string(raw);
    }
    for (auto [variant, step] : {std::pair{QuotientVariant::classical, 0.0}, std::pair{QuotientVariant::chain, 1.0}}) {
      const QuotientMetric q = quotient_pseudometric(*s, labels, variant);
      const DistanceMatrix o = quotient_oracle(*s, fiber, next, step);
      REQUIRE(q.metric.size() == next);
      for (std::size_t i = 0; i < next; ++i)
        for (std::size_t j = 0; j < next; ++j) CHECK(q.metric.dist(i, j) == doctest::Approx(o(i, j)));
      if (variant == QuotientVariant::chain) CHECK(check_metric_axioms(q.metric).ok);
    }
  }
}

TEST_CASE("uniformly discrete comparison of the two quotient variants") {
  auto g = testing::rng(15);
  for (double c : {1.0, 2.0, 0.5}) {
    std::vector<std::string> labels;
    const std::size_t n = 40;
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) d(i, j) = c * std::abs(static_cast<double>(i) - j);
    }
    const FiniteSpace s(labels, d, 0, c * (n - 1));
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::string> fibers;
      const std::size_t m = 2 + g() % 7;
      for (std::size_t i = 0; i < n; ++i) fibers.push_back(std::to_string(g() % m));
      const auto lo = quotient_pseudometric(s, fibers, QuotientVariant::classical);
      const auto hi = quotient_pseudometric(s, fibers, QuotientVariant::chain);
      for (PointIndex i = 0; i < lo.metric.size(); ++i)
        for (PointIndex j = 0; j < lo.metric.size(); ++j) {
          CHECK(lo.metric.dist(i, j) <= hi.metric.dist(i, j) + 1e-9);
          CHECK(hi.metric.dist(i, j) <= (1 + 1 / c) * lo.metric.dist(i, j) + 1e-9);
        }
    }
  }
}

TEST_CASE("schreier balls") {
  const auto s = testing::segment(-5, 5);
  const auto balls = schreier_balls(translation_action(s), 2);
  CHECK(balls[at(-5, 0)] == PointSet{at(-5, -2), at(-5, -1), at(-5, 0), at(-5, 1), at(-5, 2)});
  CHECK(balls[at(-5, 5)].size() == 5);
}
