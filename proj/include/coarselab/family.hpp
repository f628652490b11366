#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

using PointSet = std::vector<PointIndex>;  // sorted, duplicate-free

// A finite list of nonempty point subsets of a space with `universe` points.
//
// Whenever a family is used as a cover it is implicitly extended by all
// singletons; the stored members are never padded.
class Family {
 public:
  Family() = default;
  // Members are sorted and deduplicated internally. Throws MalformedError
  // for empty members or indices outside [0, universe).
  Family(std::size_t universe, std::vector<PointSet> members);

  static Family singletons(std::size_t universe);

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<PointSet>& members() const { return members_; }
  const PointSet& member(std::size_t i) const { return members_[i]; }
  // True when the stored members already cover every point.
  bool is_cover() const { return is_cover_; }

  // For each point, the indices of the members containing it.
  std::vector<std::vector<std::size_t>> incidence() const;

  // Copy with identical members removed and members in canonical order.
  Family normalized() const;

  bool operator==(const Family&) const = default;

 private:
  std::size_t universe_ = 0;
  std::vector<PointSet> members_;
  bool is_cover_ = false;
};

// st(targets, wrt): member i is targets[i] united with every member of wrt
// that meets it. Output has the same length as `targets`.
Family star(const Family& targets, const Family& wrt);

// Supremum of member diameters; 0 for an empty or all-singleton family.
double mesh(const Family& f, const FiniteSpace& s);

// u refines v: every member of u with at least two points lies inside
// some member of v.
bool refines(const Family& u, const Family& v);

// One closed ball B(x, r) per point x.
Family ball_cover(const FiniteSpace& s, double r);

// Equivalence classes of `a` under chains of co-membership in members of u
// (singletons implicit). Classes are sorted and listed by smallest element.
std::vector<PointSet> u_components(std::span<const PointIndex> a, const Family& u);

// Symmetric relation "x and y lie in a common member" (x ~ x always).
class CoMembership {
 public:
  explicit CoMembership(const Family& f);
  bool together(PointIndex x, PointIndex y) const {
    return x == y || bits_[x * n_ + y];
  }
  std::size_t universe() const { return n_; }

 private:
  std::size_t n_;
  std::vector<bool> bits_;
};

// f(U) for every member U; `map` sends points of the family's universe into
// [0, codomain_size).
Family image(const Family& f, std::span<const PointIndex> map, std::size_t codomain_size);

// Concatenation of member lists over the same universe.
Family family_union(const Family& a, const Family& b);

}  // namespace coarselab
