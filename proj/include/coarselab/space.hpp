#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace coarselab {

using PointIndex = std::size_t;

// Distances are doubles; infinity marks points in different components.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Comparison slack for composite real arithmetic. Integer-valued metrics
// are exact and never need it.
inline constexpr double kTolerance = 1e-9;

// Dense symmetric n x n distance table.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = kInfinity)
      : n_(n), d_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(PointIndex i, PointIndex j) const { return d_[i * n_ + j]; }
  double& operator()(PointIndex i, PointIndex j) { return d_[i * n_ + j]; }
  std::span<const double> row(PointIndex i) const {
    return {d_.data() + i * n_, n_};
  }
  std::span<double> row(PointIndex i) { return {d_.data() + i * n_, n_}; }

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

// A finite window of a discrete infinity-metric space.
//
// Points are addressed by index; labels are the opaque ids used in files.
// The certified core is the ball B(basepoint, window_radius): the part of
// the window that is free of truncation artifacts. The constructor checks
// the cheap invariants (zero diagonal, symmetry, nonnegativity, basepoint,
// window radius); the triangle inequality is checked by
// check_metric_axioms().
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> labels, DistanceMatrix dist,
              PointIndex basepoint, double window_radius);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(PointIndex i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<PointIndex> find(const std::string& label) const;
  // Throws MalformedError naming `field` when the label is unknown.
  PointIndex index_of(const std::string& label,
                      const std::string& field = "point") const;

  double dist(PointIndex i, PointIndex j) const { return dist_(i, j); }
  const DistanceMatrix& distances() const { return dist_; }
  PointIndex basepoint() const { return basepoint_; }
  double window_radius() const { return window_radius_; }

  // Points of B(basepoint, window_radius), ascending by index.
  const std::vector<PointIndex>& core() const { return core_; }
  bool in_core(PointIndex i) const { return in_core_[i]; }

  double diameter(std::span<const PointIndex> subset) const;
  // Largest finite distance from the basepoint.
  double max_finite_radius() const;

 private:
  std::vector<std::string> labels_;
  DistanceMatrix dist_;
  PointIndex basepoint_;
  double window_radius_;
  std::unordered_map<std::string, PointIndex> index_;
  std::vector<PointIndex> core_;
  std::vector<bool> in_core_;
};

struct AxiomViolation {
  enum class Kind { nonzero_diagonal, asymmetric, negative, triangle };
  Kind kind;
  PointIndex x = 0, y = 0, z = 0;
  double excess = 0.0;
};

struct AxiomReport {
  bool ok = true;
  std::optional<AxiomViolation> violation;
  std::size_t triples_checked = 0;
};

// Exhaustive check of d(x,x)=0, symmetry, nonnegativity and the triangle
// inequality (infinity absorbing) with slack `tol`.
AxiomReport check_metric_axioms(const DistanceMatrix& d, double tol = kTolerance);
inline AxiomReport check_metric_axioms(const FiniteSpace& s, double tol = kTolerance) {
  return check_metric_axioms(s.distances(), tol);
}

// Largest distance from `basepoint` over the points of `keep`, ignoring
// infinite entries. Used to give derived metrics a window radius that
// still covers the original core.
double covering_radius(const DistanceMatrix& d, PointIndex basepoint,
                       std::span<const PointIndex> keep);

}  // namespace coarselab
