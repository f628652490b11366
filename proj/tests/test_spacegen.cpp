#include <doctest.h>

#include <cstdlib>

#include "coarselab/errors.hpp"
#include "coarselab/graph.hpp"
#include "coarselab/spacegen.hpp"
#include "support.hpp"

using namespace coarselab;
using testing::at;

namespace {

double cycle_distance(std::int64_t a, std::int64_t b, std::int64_t n) {
  const std::int64_t r = ((a - b) % n + n) % n;
  return static_cast<double>(std::min(r, n - r));
}

ConeSpec two_point_cone() {
  DistanceMatrix d(2, 0.0);
  d(0, 1) = d(1, 0) = 1;
  return ConeSpec{FiniteSpace({"p", "q"}, d, 0, 1), {0, 1, 2}, {0, 1, 2}};
}

// Cycle of n points with the graph metric.
FiniteSpace cycle(std::size_t n) {
  std::vector<WeightedEdge> e;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    e.push_back({i, (i + 1) % n, 1.0});
    labels.push_back("c" + std::to_string(i));
  }
  return FiniteSpace(labels, graph_distances(n, e), 0, static_cast<double>(n / 2));
}

}  // namespace

TEST_CASE("segment examples") {
  const FiniteSpace single = segment_space(0, 0);
  CHECK(single.size() == 1);
  CHECK(check_metric_axioms(single).ok);
  CHECK(segment_space(-3, 3).dist(at(-3, -3), at(-3, 3)) == 6);
  const FiniteSpace ray = segment_space(0, 100);
  CHECK(ray.label(ray.basepoint()) == "0");
  CHECK(ray.window_radius() == 100);
  CHECK(segment_space(-5, 8).window_radius() == 5);
  CHECK(segment_space(-100, 0).window_radius() == 100);
  const FiniteSpace off = segment_space(3, 9);
  CHECK(off.label(off.basepoint()) == "3");
  CHECK(off.window_radius() == 6);
  CHECK_THROWS_AS(segment_space(2, 1), ParameterError);
}

TEST_CASE("axes examples") {
  const FiniteSpace one = axes_space(1, 10);
  const FiniteSpace seg = segment_space(0, 10);
  // "o" -> 0, "0:t" -> t is an isometry.
  for (PointIndex x = 0; x < one.size(); ++x) {
    for (PointIndex y = 0; y < one.size(); ++y) {
      auto value = [&](PointIndex p) {
        return one.label(p) == "o" ? 0 : std::atoi(one.label(p).substr(2).c_str());
      };
      CHECK(one.dist(x, y) == seg.dist(at(0, value(x)), at(0, value(y))));
    }
  }
  const FiniteSpace tri = axes_space(3, 10);
  CHECK(tri.dist(tri.index_of("0:4"), tri.index_of("1:5")) == 9);
  CHECK(tri.dist(tri.index_of("2:4"), tri.index_of("2:9")) == 5);
  CHECK(testing::worst_triangle_excess(tri) <= 0);
  CHECK(testing::symmetric_with_zero_diagonal(tri));
  CHECK_THROWS_AS(axes_space(0, 3), ParameterError);
}

TEST_CASE("cone examples") {
  const ConeSpec spec = two_point_cone();
  const FiniteSpace c = cone_space(spec);
  REQUIRE(c.size() == 5);
  CHECK(c.label(0) == "apex");
  CHECK(c.dist(0, 0) == 0);
  const PointIndex p1 = c.index_of("p@1"), q1 = c.index_of("q@1");
  const PointIndex p2 = c.index_of("p@2"), q2 = c.index_of("q@2");
  CHECK(c.dist(p1, q1) == 1);
  CHECK(c.dist(p2, q2) == 2);
  CHECK(c.dist(0, p2) == 2);

  // Oracle: six unmerged samples (x, t), zero-weight links between the two
  // level-0 samples, then Floyd-Warshall.
  const double ts[] = {0, 1, 2};
  const double phi[] = {0, 1, 2};
  DistanceMatrix w(6);
  auto id = [](int x, int l) { return static_cast<std::size_t>(l * 2 + x); };
  for (int x = 0; x < 2; ++x)
    for (int l = 0; l < 3; ++l)
      for (int y = 0; y < 2; ++y)
        for (int k = 0; k < 3; ++k) {
          const double base = x == y ? 0.0 : 1.0;
          w(id(x, l), id(y, k)) = std::abs(ts[l] - ts[k]) + std::max(phi[l], phi[k]) * base;
        }
  w(id(0, 0), id(1, 0)) = w(id(1, 0), id(0, 0)) = 0;
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) w(i, j) = std::min(w(i, j), w(i, k) + w(k, j));
  auto to_cone = [&](std::size_t node) -> PointIndex {
    const int l = static_cast<int>(node / 2);
    const int x = static_cast<int>(node % 2);
    return l == 0 ? 0 : 1 + (l - 1) * 2 + x;
  };
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(c.dist(to_cone(i), to_cone(j)) == doctest::Approx(w(i, j)));
}

TEST_CASE("cone spec validation") {
  ConeSpec spec = two_point_cone();
  spec.weight[1] = 0;
  CHECK_THROWS_AS(cone_space(spec), SpecError);
  spec = two_point_cone();
  spec.weight[2] = -1;
  CHECK_THROWS_AS(cone_space(spec), SpecError);
  spec = two_point_cone();
  spec.levels = {0, 2, 1};
  CHECK_THROWS_AS(cone_space(spec), SpecError);
  spec = two_point_cone();
  spec.levels = {1, 2, 3};
  CHECK_THROWS_AS(cone_space(spec), SpecError);
}

TEST_CASE("cone over a cycle: axioms and rotation displacement") {
  const FiniteSpace base = cycle(8);
  ConeSpec spec{base, {0, 1, 2, 3, 4, 5, 6}, {0, 0.5, 1, 1.5, 2, 2.5, 3}};
  const FiniteSpace c = cone_space(spec);
  CHECK(check_metric_axioms(c).ok);
  CHECK(testing::worst_triangle_excess(c) <= 1e-9);
  Permutation rot(8);
  for (std::size_t i = 0; i < 8; ++i) rot[i] = (i + 1) % 8;
  const Permutation lift = cone_lift(spec, rot);
  double previous = 0.0;
  for (std::size_t l = 1; l < spec.levels.size(); ++l) {
    double m = kInfinity;
    for (std::size_t x = 0; x < 8; ++x) {
      const PointIndex p = 1 + (l - 1) * 8 + x;
      m = std::min(m, c.dist(p, lift[p]));
    }
    CHECK(m >= previous);
    previous = m;
  }
  // The rotation lift is an isometry of the cone.
  for (PointIndex x = 0; x < c.size(); ++x)
    for (PointIndex y = 0; y < c.size(); ++y) CHECK(c.dist(lift[x], lift[y]) == doctest::Approx(c.dist(x, y)));
}

TEST_CASE("box space examples") {
  SUBCASE("single level is the cycle metric") {
    const BoxSpace b = box_space(z_box_spec({9}));
    const auto& s = *b.space;
    CHECK(s.dist(s.index_of("L1:1"), s.index_of("L1:8")) == 2);
  }
  SUBCASE("two levels are separated by w_1") {
    const BoxSpace b = box_space(z_box_spec({3, 9}));
    REQUIRE(b.inter_level_weights.size() == 1);
    CHECK(b.inter_level_weights[0] == 4);
    double cross = kInfinity;
    for (PointIndex a : b.level_points[0])
      for (PointIndex c : b.level_points[1]) cross = std::min(cross, b.space->dist(a, c));
    CHECK(cross == 4);
    CHECK(cross > 1 + 2);
  }
  SUBCASE("tower (3, 9, 27)") {
    const std::vector<std::int64_t> moduli{3, 9, 27};
    const BoxSpace b = box_space(z_box_spec(moduli));
    const auto& s = *b.space;
    CHECK(check_metric_axioms(s).ok);
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      const auto& pts = b.level_points[i];
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t c = 0; c < pts.size(); ++c)
          CHECK(s.dist(pts[a], pts[c]) == cycle_distance(a, c, moduli[i]));
      for (std::size_t j = i + 1; j < moduli.size(); ++j) {
        double cross = kInfinity;
        for (PointIndex p : b.level_points[i])
          for (PointIndex q : b.level_points[j]) cross = std::min(cross, s.dist(p, q));
        CHECK(cross > static_cast<double>((i + 1) + (j + 1)));
      }
    }
    const auto& plus = b.action.generators()[b.action.find_generator("+1").value()].perm;
    for (PointIndex x = 0; x < s.size(); ++x)
      for (PointIndex y = 0; y < s.size(); ++y) CHECK(s.dist(plus[x], plus[y]) == s.dist(x, y));
    CHECK(b.action.is_isometric());
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(z_box_spec({3, 8}), SpecError);
    CHECK_THROWS_AS(z_box_spec({9, 3}), SpecError);
    BoxSpec spec = z_box_spec({2, 4});
    spec.levels[1].projection = {0, 0, 1, 1};  // not a homomorphism Z/4 -> Z/2
    CHECK_THROWS_AS(box_space(spec), SpecError);
  }
}

TEST_CASE("segment actions") {
  const auto s = testing::segment(-5, 5);
  const GroupAction neg = negation_action(s);
  const auto& g = neg.generators().front();
  CHECK(g.symbol == "gamma");
  CHECK(g.inverse == "gamma");
  CHECK(g.perm[at(-5, 2)] == at(-5, -2));
  const GroupAction tr = translation_action(s);
  const auto& up = tr.generators()[tr.find_generator("+1").value()];
  CHECK(up.inverse == "-1");
  CHECK(up.perm[at(-5, 5)] == at(-5, -5));
  CHECK(up.perm[at(-5, 0)] == at(-5, 1));
  CHECK_THROWS_AS(negation_action(testing::segment(-2, 5)), ParameterError);
}
