#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coarselab/action.hpp"
#include "coarselab/space.hpp"

namespace coarselab {

// Integers lo..hi with |x - y|, labelled by their decimal value. The
// basepoint is 0 when lo <= 0 <= hi, otherwise lo. With 0 inside the range
// the window radius is the shorter of the nonempty sides (a ray keeps its
// full length); without 0 it is hi - lo.
FiniteSpace segment_space(std::int64_t lo, std::int64_t hi);

// x -> -x on a window of integers symmetric about 0, as generator "gamma".
GroupAction negation_action(std::shared_ptr<const FiniteSpace> segment);

// x -> x + 1 on a window of consecutive integers, the top point wrapping to
// the bottom so the map stays a bijection; generators "+1" and "-1".
GroupAction translation_action(std::shared_ptr<const FiniteSpace> segment);

// Origin "o" plus k arms "a:t" (0 <= a < k, 1 <= t <= N) glued at the
// origin, with the path metric. Window radius N.
FiniteSpace axes_space(std::int64_t arms, std::int64_t length);

struct ConeSpec {
  FiniteSpace base;
  std::vector<double> levels;  // strictly ascending, starting at 0
  std::vector<double> weight;  // weight[i] is Phi(levels[i])
};

// Sampled metric cone. Point 0 is the apex; the point (x, levels[l]) for
// l >= 1 has index 1 + (l - 1) * |base| + x and label "x@t". Distances are
// shortest paths over the complete graph with edge weights
// |t - t'| + max(Phi(t), Phi(t')) * d_base(x, x').
FiniteSpace cone_space(const ConeSpec& spec);

// Extends a permutation of the base levelwise, fixing the apex.
Permutation cone_lift(const ConeSpec& spec, const Permutation& base_perm);

// One finite quotient of the acting group. Elements are 0..order-1, with
// mul[a][b] = a * b; generator_images[k] is the image of the k-th group
// generator, and projection maps each element onto the previous level
// (empty for the first level).
struct QuotientLevel {
  std::vector<std::vector<std::size_t>> mul;
  std::vector<std::size_t> generator_images;
  std::vector<std::size_t> projection;
};

struct BoxSpec {
  std::vector<std::string> generator_symbols;
  std::vector<QuotientLevel> levels;
};

// Tower Z/n_1 <- Z/n_2 <- ... for strictly ascending moduli with each
// dividing the next, generated by "+1".
BoxSpec z_box_spec(const std::vector<std::int64_t>& moduli);

struct BoxSpace {
  std::shared_ptr<const FiniteSpace> space;
  GroupAction action;  // left multiplication by the generators
  std::vector<std::vector<PointIndex>> level_points;
  std::vector<double> inter_level_weights;  // w_i joins level i+1 to level i
};

// Disjoint union of the levels, each carrying its word metric, with every
// element of level i+1 joined to its projection in level i by an edge of
// weight w_i = max(2i + 2, diam(level i+1)) (levels numbered from 1).
// Points are labelled "L<i>:<element>".
BoxSpace box_space(const BoxSpec& spec);

}  // namespace coarselab
