#include "coarselab/family.hpp"

#include <algorithm>
#include <string>

#include "coarselab/errors.hpp"
#include "coarselab/union_find.hpp"

namespace coarselab {

Family::Family(std::size_t universe, std::vector<PointSet> members)
    : universe_(universe), members_(std::move(members)) {
  std::vector<bool> seen(universe_, false);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    auto& m = members_[i];
    if (m.empty()) {
      throw MalformedError("members[" + std::to_string(i) + "]: member is empty");
    }
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    if (m.back() >= universe_) {
      throw MalformedError("members[" + std::to_string(i) + "]: point index " +
                           std::to_string(m.back()) + " is not in the space");
    }
    for (PointIndex p : m) {
      if (!seen[p]) {
        seen[p] = true;
        ++covered;
      }
    }
  }
  is_cover_ = covered == universe_;
}

Family Family::singletons(std::size_t universe) {
  std::vector<PointSet> members(universe);
  for (PointIndex i = 0; i < universe; ++i) members[i] = {i};
  return Family(universe, std::move(members));
}

std::vector<std::vector<std::size_t>> Family::incidence() const {
  std::vector<std::vector<std::size_t>> inc(universe_);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    for (PointIndex p : members_[i]) inc[p].push_back(i);
  }
  return inc;
}

Family Family::normalized() const {
  std::vector<PointSet> m = members_;
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return Family(universe_, std::move(m));
}

Family star(const Family& targets, const Family& wrt) {
  if (targets.universe() != wrt.universe()) {
    throw MalformedError("wrt: families live over spaces of different size");
  }
  const std::size_t n = targets.universe();
  const auto inc = wrt.incidence();
  std::vector<bool> in_out(n, false);
  std::vector<bool> member_used(wrt.size(), false);
  std::vector<PointSet> out;
  out.reserve(targets.size());
  for (const auto& b : targets.members()) {
    PointSet acc(b.begin(), b.end());
    for (PointIndex p : b) in_out[p] = true;
    std::vector<std::size_t> used;
    for (PointIndex p : b) {
      for (std::size_t mi : inc[p]) {
        if (member_used[mi]) continue;
        member_used[mi] = true;
        used.push_back(mi);
        for (PointIndex q : wrt.member(mi)) {
          if (!in_out[q]) {
            in_out[q] = true;
            acc.push_back(q);
          }
        }
      }
    }
    for (PointIndex q : acc) in_out[q] = false;
    for (std::size_t mi : used) member_used[mi] = false;
    std::sort(acc.begin(), acc.end());
    out.push_back(std::move(acc));
  }
  return Family(n, std::move(out));
}

double mesh(const Family& f, const FiniteSpace& s) {
  if (f.universe() != s.size()) throw MalformedError("family: universe does not match the space");
  double best = 0.0;
  for (const auto& m : f.members()) best = std::max(best, s.diameter(m));
  return best;
}

bool refines(const Family& u, const Family& v) {
  if (u.universe() != v.universe()) throw MalformedError("families live over spaces of different size");
  const auto inc = v.incidence();
  for (const auto& m : u.members()) {
    if (m.size() < 2) continue;
    // Candidate containers are the members of v holding the first point.
    bool found = false;
    for (std::size_t vi : inc[m.front()]) {
      const auto& big = v.member(vi);
      if (big.size() >= m.size() && std::includes(big.begin(), big.end(), m.begin(), m.end())) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

Family ball_cover(const FiniteSpace& s, double r) {
  if (!(r >= 0.0)) throw ParameterError("r: ball radius must be nonnegative");
  std::vector<PointSet> members(s.size());
  for (PointIndex x = 0; x < s.size(); ++x) {
    auto row = s.distances().row(x);
    for (PointIndex y = 0; y < s.size(); ++y) {
      if (row[y] <= r) members[x].push_back(y);
    }
  }
  return Family(s.size(), std::move(members));
}

std::vector<PointSet> u_components(std::span<const PointIndex> a, const Family& u) {
  const std::size_t n = u.universe();
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= n) throw MalformedError("a: point index outside the space");
    slot[a[i]] = i;
  }
  UnionFind uf(a.size());
  for (const auto& m : u.members()) {
    std::size_t first = n;
    for (PointIndex p : m) {
      if (slot[p] == n) continue;
      if (first == n) {
        first = slot[p];
      } else {
        uf.unite(first, slot[p]);
      }
    }
  }
  std::vector<std::size_t> root_to_class(a.size(), a.size());
  std::vector<PointSet> classes;
  // Visit points in ascending order so classes come out ordered by their
  // smallest element.
  std::vector<PointIndex> sorted(a.begin(), a.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (PointIndex p : sorted) {
    const std::size_t r = uf.find(slot[p]);
    if (root_to_class[r] == a.size()) {
      root_to_class[r] = classes.size();
      classes.emplace_back();
    }
    classes[root_to_class[r]].push_back(p);
  }
  return classes;
}

CoMembership::CoMembership(const Family& f) : n_(f.universe()), bits_(n_ * n_, false) {
  for (const auto& m : f.members()) {
    for (PointIndex x : m) {
      for (PointIndex y : m) bits_[x * n_ + y] = true;
    }
  }
}

Family image(const Family& f, std::span<const PointIndex> map, std::size_t codomain_size) {
  if (map.size() != f.universe()) throw MalformedError("map: not defined on every point");
  std::vector<PointSet> out;
  out.reserve(f.size());
  for (const auto& m : f.members()) {
    PointSet img;
    img.reserve(m.size());
    for (PointIndex p : m) img.push_back(map[p]);
    out.push_back(std::move(img));
  }
  return Family(codomain_size, std::move(out));
}

Family family_union(const Family& a, const Family& b) {
  if (a.universe() != b.universe()) throw MalformedError("families live over spaces of different size");
  std::vector<PointSet> m = a.members();
  m.insert(m.end(), b.members().begin(), b.members().end());
  return Family(a.universe(), std::move(m));
}

}  // namespace coarselab
