#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "coarselab/action.hpp"
#include "coarselab/family.hpp"
#include "coarselab/space.hpp"
#include "coarselab/spacegen.hpp"

namespace testing {

using namespace coarselab;

// Seed for randomized sampling; COARSELAB_SEED overrides the default.
inline std::uint64_t base_seed() {
  if (const char* s = std::getenv("COARSELAB_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611ULL;
}

inline std::mt19937_64 rng(std::uint64_t stream) { return std::mt19937_64(base_seed() * 1000003ULL + stream); }

inline std::shared_ptr<const FiniteSpace> segment(std::int64_t lo, std::int64_t hi) {
  return std::make_shared<const FiniteSpace>(segment_space(lo, hi));
}

// Index of integer value v in segment(lo, hi).
inline PointIndex at(std::int64_t lo, std::int64_t v) { return static_cast<PointIndex>(v - lo); }

// Straight from the definition: max over x, y, z of d(x,z) - d(x,y) - d(y,z),
// infinite terms skipped.
inline double worst_triangle_excess(const FiniteSpace& s) {
  double worst = -kInfinity;
  const std::size_t n = s.size();
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      for (PointIndex z = 0; z < n; ++z) {
        const double lhs = s.dist(x, z);
        const double rhs = s.dist(x, y) + s.dist(y, z);
        if (rhs == kInfinity) continue;
        worst = std::max(worst, lhs == kInfinity ? kInfinity : lhs - rhs);
      }
  return worst;
}

inline bool symmetric_with_zero_diagonal(const FiniteSpace& s) {
  for (PointIndex x = 0; x < s.size(); ++x) {
    if (s.dist(x, x) != 0.0) return false;
    for (PointIndex y = 0; y < s.size(); ++y) {
      if (s.dist(x, y) != s.dist(y, x) || s.dist(x, y) < 0.0) return false;
    }
  }
  return true;
}

// Random family with `count` members of up to `max_size` points.
inline Family random_family(std::mt19937_64& g, std::size_t n, std::size_t count, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::vector<PointSet> members;
  for (std::size_t i = 0; i < count; ++i) {
    PointSet m;
    const std::size_t k = size(g);
    for (std::size_t j = 0; j < k; ++j) m.push_back(pick(g));
    members.push_back(std::move(m));
  }
  return Family(n, std::move(members));
}

// Random permutation of 0..n-1.
inline Permutation random_permutation(std::mt19937_64& g, std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), g);
  return p;
}

}  // namespace testing
