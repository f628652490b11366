#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarselab/action.hpp"
#include "coarselab/family.hpp"
#include "coarselab/invariants.hpp"
#include "coarselab/space.hpp"

namespace coarselab {

struct Weight {
  std::size_t vertex;
  double value;
};

// A map from points to the simplex on a finite vertex set, stored as one
// sparse row per point (sorted by vertex, zero weights dropped).
class PartitionOfUnity {
 public:
  PartitionOfUnity(std::vector<std::string> vertices, std::vector<std::vector<Weight>> rows);

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Weight>& row(PointIndex x) const { return rows_[x]; }
  double value(PointIndex x, std::size_t vertex) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::vector<Weight>> rows_;
};

// Sum over vertices of |phi_i(x) - phi_i(y)|.
double l1_distance(const PartitionOfUnity& phi, PointIndex x, PointIndex y);

// Integer value of every label; throws MalformedError otherwise.
std::vector<double> integer_coordinates(const FiniteSpace& s);

// Indicator of the block floor(c / pitch); vertices "b<k>".
PartitionOfUnity block_partition(std::span<const double> coords, double pitch);
// Piecewise linear hats centred at the multiples of pitch; vertices "n<k*pitch>".
PartitionOfUnity hat_partition(std::span<const double> coords, double pitch);
PartitionOfUnity constant_partition(std::size_t points);

struct VariationResult {
  double value = 0.0;
  std::optional<std::pair<PointIndex, PointIndex>> pair;  // a maximizing pair
};

// Largest l1 distance between points sharing a member of u.
VariationResult variation(const PartitionOfUnity& phi, const Family& u);

// |E.g Δ E.h| / |E| with products compared on the core.
double folner_ratio(const GroupAction& action, std::span<const GroupElement> e,
                    const GroupElement& g, const GroupElement& h);
// |E Δ E.g| / |E|.
double folner_defect(const GroupAction& action, std::span<const GroupElement> e,
                     const GroupElement& g);

// psi_i(x) = (1/|E|) sum over k in E of phi_i(k.x).
PartitionOfUnity folner_average(const PartitionOfUnity& phi, std::span<const GroupElement> e,
                                const GroupAction& action);

// {x : phi_i(x) > 0} for every vertex with nonempty support.
Family support_family(const PartitionOfUnity& phi);

struct ExactnessResult {
  double support_mesh = 0.0;
  std::size_t widest_vertex = 0;
  double variation = 0.0;
  std::optional<std::pair<PointIndex, PointIndex>> variation_pair;
  double core_diameter = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

// Fails when the variation reaches epsilon; inconclusive when some support
// is as wide as the core, since then boundedness is not visible.
ExactnessResult exactness_witness_check(const FiniteSpace& s, const PartitionOfUnity& phi,
                                        const Family& u, double epsilon);

// Over increasing windows: fails when the support mesh keeps growing.
Verdict support_growth(std::span<const ExactnessResult> windows);

// Throws MalformedError unless the elements are pairwise distinct and
// nonempty.
void validate_folner_set(std::span<const GroupElement> e);

}  // namespace coarselab
