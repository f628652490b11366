#include "coarselab/space.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "coarselab/errors.hpp"
#include "coarselab/parallel.hpp"

namespace coarselab {

FiniteSpace::FiniteSpace(std::vector<std::string> labels, DistanceMatrix dist,
                         PointIndex basepoint, double window_radius)
    : labels_(std::move(labels)),
      dist_(std::move(dist)),
      basepoint_(basepoint),
      window_radius_(window_radius) {
  const std::size_t n = labels_.size();
  if (n == 0) throw MalformedError("points: a space needs at least one point");
  if (dist_.size() != n) {
    throw MalformedError("metric: distance table is " + std::to_string(dist_.size()) +
                         "x" + std::to_string(dist_.size()) + " but there are " +
                         std::to_string(n) + " points");
  }
  for (PointIndex i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw MalformedError("points: duplicate point id '" + labels_[i] + "'");
    }
  }
  for (PointIndex i = 0; i < n; ++i) {
    if (dist_(i, i) != 0.0) {
      throw MalformedError("metric: d(" + labels_[i] + "," + labels_[i] + ") must be 0");
    }
    for (PointIndex j = i + 1; j < n; ++j) {
      const double a = dist_(i, j);
      const double b = dist_(j, i);
      if (std::isnan(a) || a < 0.0) {
        throw MalformedError("metric: d(" + labels_[i] + "," + labels_[j] +
                             ") must be nonnegative");
      }
      if (a != b && !(std::abs(a - b) <= kTolerance)) {
        throw MalformedError("metric: d(" + labels_[i] + "," + labels_[j] +
                             ") is not symmetric");
      }
    }
  }
  if (basepoint_ >= n) throw MalformedError("basepoint: index out of range");
  if (!(window_radius_ >= 0.0)) {
    throw MalformedError("window_radius: must be a nonnegative number");
  }
  if (window_radius_ > max_finite_radius() + kTolerance) {
    throw MalformedError("window_radius: exceeds the largest finite distance from the basepoint");
  }
  in_core_.assign(n, false);
  for (PointIndex i = 0; i < n; ++i) {
    if (dist_(basepoint_, i) <= window_radius_ + kTolerance) {
      in_core_[i] = true;
      core_.push_back(i);
    }
  }
}

std::optional<PointIndex> FiniteSpace::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointIndex FiniteSpace::index_of(const std::string& label, const std::string& field) const {
  auto idx = find(label);
  if (!idx) throw MalformedError(field + ": unknown point id '" + label + "'");
  return *idx;
}

double FiniteSpace::diameter(std::span<const PointIndex> subset) const {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      best = std::max(best, dist_(subset[a], subset[b]));
    }
  }
  return best;
}

double FiniteSpace::max_finite_radius() const {
  double best = 0.0;
  for (double v : dist_.row(basepoint_)) {
    if (v != kInfinity) best = std::max(best, v);
  }
  return best;
}

AxiomReport check_metric_axioms(const DistanceMatrix& d, double tol) {
  AxiomReport report;
  const std::size_t n = d.size();
  for (PointIndex x = 0; x < n; ++x) {
    if (d(x, x) != 0.0) {
      report.ok = false;
      report.violation = AxiomViolation{AxiomViolation::Kind::nonzero_diagonal, x, x, x, d(x, x)};
      return report;
    }
    for (PointIndex y = 0; y < n; ++y) {
      if (d(x, y) < 0.0 || std::isnan(d(x, y))) {
        report.ok = false;
        report.violation = AxiomViolation{AxiomViolation::Kind::negative, x, y, y, -d(x, y)};
        return report;
      }
      if (d(x, y) != d(y, x) && !(std::abs(d(x, y) - d(y, x)) <= tol)) {
        report.ok = false;
        report.violation = AxiomViolation{AxiomViolation::Kind::asymmetric, x, y, y,
                                          std::abs(d(x, y) - d(y, x))};
        return report;
      }
    }
  }
  // Triangle: d(x,z) <= d(x,y) + d(y,z) for all triples; rows are scanned in
  // parallel and the first violation by x is kept.
  std::vector<std::optional<AxiomViolation>> per_row(n);
  parallel_for(n, [&](std::size_t x) {
    auto rx = d.row(x);
    for (PointIndex y = 0; y < n; ++y) {
      const double dxy = rx[y];
      if (dxy == kInfinity) continue;
      auto ry = d.row(y);
      for (PointIndex z = 0; z < n; ++z) {
        const double bound = dxy + ry[z];
        if (rx[z] > bound + tol) {
          per_row[x] = AxiomViolation{AxiomViolation::Kind::triangle, x, y, z,
                                      rx[z] == kInfinity ? kInfinity : rx[z] - bound};
          return;
        }
      }
    }
  });
  report.triples_checked = n * n * n;
  for (auto& v : per_row) {
    if (v) {
      report.ok = false;
      report.violation = v;
      break;
    }
  }
  return report;
}

double covering_radius(const DistanceMatrix& d, PointIndex basepoint,
                       std::span<const PointIndex> keep) {
  double r = 0.0;
  for (PointIndex p : keep) {
    const double v = d(basepoint, p);
    if (v != kInfinity) r = std::max(r, v);
  }
  return r;
}

}  // namespace coarselab
