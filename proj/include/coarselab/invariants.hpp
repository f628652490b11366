#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarselab/action.hpp"
#include "coarselab/family.hpp"
#include "coarselab/space.hpp"

namespace coarselab {

// Outcome of checking an asymptotic property on a finite window. Nothing
// here claims the statement beyond the certified core.
enum class Verdict { holds_on_window, fails, inconclusive };

std::string to_string(Verdict v);

// A point set of the form B(basepoint, radius); radius is negative for the
// empty set.
struct BallSet {
  PointSet points;
  double radius = -1.0;
};

// Smallest ball around the basepoint containing every point of `points`.
BallSet enclosing_ball(const FiniteSpace& s, std::span<const PointIndex> points);

struct DisplacementRow {
  double radius;
  double min_displacement;  // min of d(x, g.x) over core points with d(o, x) >= radius
};

struct DiscontinuityResult {
  double radius;  // R
  PointSet k;     // {x : d(x, g.x) < R}
  double allowed_radius;  // window_radius - R
  Verdict verdict;
  std::optional<PointIndex> counterexample;  // point of K outside B(o, allowed_radius)
};

struct DiscontinuityReport {
  std::vector<DisplacementRow> profile;
  std::vector<DiscontinuityResult> results;
};

// K_R for each R together with the displacement profile sampled at the same
// radii. The element must move some core point.
DiscontinuityReport discontinuity_profile(const GroupAction& action, const GroupElement& g,
                                          std::span<const double> radii);

struct SeparationResult {
  BallSet k;
  Verdict verdict;
  // Violating configuration with the farthest point: x u y, g1 != g2 and
  // {g1.x, g2.y} inside one member of v.
  struct Violation {
    PointIndex x, y;
    std::size_t g1, g2;  // indices into the deduplicated element set
  };
  std::optional<Violation> farthest;
  std::vector<GroupElement> elements;  // the deduplicated input set
};

// Smallest basepoint ball K outside of which no x u y and g1 != g2 in
// `elements` put {g1.x, g2.y} inside a member of v (g1.x == g2.y counts).
// holds_on_window when K plus the mesh of u stays in the core.
SeparationResult separation_bound(const GroupAction& action, std::span<const GroupElement> elements,
                                  const Family& u, const Family& v);

struct OneEndedResult {
  double radius;  // requested hole radius r
  Verdict verdict;
  std::optional<double> connected_from;  // smallest r' >= r with connected complement
  std::size_t components = 0;            // components of the complement at r
  std::optional<std::pair<PointIndex, PointIndex>> counterexample;
};

// For each r, looks for the smallest r' >= r such that the core minus
// B(o, r') is u-connected.
std::vector<OneEndedResult> one_ended_check(const FiniteSpace& s, const Family& u,
                                            std::span<const double> hole_radii);

struct LightnessResult {
  double max_diameter = 0.0;
  PointSet worst_component;
  Verdict verdict = Verdict::inconclusive;  // a single window never decides
};

// u-components of f^-1(V) for every member V of v (codomain points missed
// by v count as singleton members); reports the largest diameter.
LightnessResult coarsely_light_check(const FiniteSpace& domain, std::span<const PointIndex> f,
                                     const Family& u, const Family& v);

// Growth verdict over results on increasing windows: fails when the
// diameter grows, holds when it stays put.
Verdict lightness_growth(std::span<const LightnessResult> windows);

struct ChainLink {
  PointIndex a, b;
};

struct WeakQuotientRow {
  double radius;
  std::size_t n;
  double s;
  PointIndex y, y2;  // pair realizing n at the chosen s
  std::vector<ChainLink> witness;
};

struct WeakQuotientResult {
  Verdict verdict = Verdict::holds_on_window;
  std::vector<WeakQuotientRow> rows;
  std::optional<PointIndex> uncovered;  // codomain point farther than T from the image
  std::optional<std::pair<PointIndex, PointIndex>> failing_pair;
  std::optional<double> failing_radius;
};

// Chain certificate for f: X -> Y at tolerance T. For each R finds the
// smallest n <= n_budget (at the largest admissible S) and then the smallest
// S <= s_budget keeping that n, over pairs of core points of Y.
WeakQuotientResult weak_quotient_certificate(const FiniteSpace& x, const FiniteSpace& y,
                                             std::span<const PointIndex> f, double t,
                                             std::span<const double> radii, std::size_t n_budget,
                                             double s_budget);

struct IdentifyResult {
  bool unique = false;
  std::optional<GroupElement> element;  // best candidate; ties by shortlex word
  std::vector<GroupElement> candidates;
  PointSet exceptional;  // core points where f differs from element
  BallSet k;
  BallSet k_prime;
  Verdict one_ended = Verdict::inconclusive;  // whether k_prime has connected complement
  std::size_t components = 0;                 // u-components outside k_prime
};

// Recovers the group element f is close to. `f` maps the window to itself,
// `v` and `elements` (F) witness closeness, `u` is the connectivity scale.
IdentifyResult identify_group_element(std::span<const PointIndex> f, const GroupAction& action,
                                      const Family& v, std::span<const GroupElement> elements,
                                      const Family& u);

// F.F^-1 without repeats, shortest words first.
std::vector<GroupElement> difference_set(const GroupAction& action,
                                         std::span<const GroupElement> elements);

}  // namespace coarselab
