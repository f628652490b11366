#include "coarselab/propa.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <unordered_set>

#include "coarselab/errors.hpp"
#include "coarselab/parallel.hpp"

namespace coarselab {

PartitionOfUnity::PartitionOfUnity(std::vector<std::string> vertices,
                                   std::vector<std::vector<Weight>> rows)
    : vertices_(std::move(vertices)), rows_(std::move(rows)) {
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    auto& row = rows_[x];
    const std::string field = "rows[" + std::to_string(x) + "]";
    std::sort(row.begin(), row.end(),
              [](const Weight& a, const Weight& b) { return a.vertex < b.vertex; });
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].vertex >= vertices_.size()) throw MalformedError(field + ": unknown vertex");
      if (i > 0 && row[i].vertex == row[i - 1].vertex) {
        throw MalformedError(field + ": vertex '" + vertices_[row[i].vertex] + "' listed twice");
      }
      if (!std::isfinite(row[i].value) || row[i].value < 0.0 || row[i].value > 1.0 + kTolerance) {
        throw MalformedError(field + ": weights must lie in [0, 1]");
      }
      sum += row[i].value;
    }
    if (std::fabs(sum - 1.0) > kTolerance) {
      throw MalformedError(field + ": weights sum to " + std::to_string(sum) + ", not 1");
    }
    std::erase_if(row, [](const Weight& w) { return w.value == 0.0; });
  }
}

double PartitionOfUnity::value(PointIndex x, std::size_t vertex) const {
  const auto& row = rows_[x];
  auto it = std::lower_bound(row.begin(), row.end(), vertex,
                             [](const Weight& w, std::size_t v) { return w.vertex < v; });
  return it != row.end() && it->vertex == vertex ? it->value : 0.0;
}

double l1_distance(const PartitionOfUnity& phi, PointIndex x, PointIndex y) {
  const auto& a = phi.row(x);
  const auto& b = phi.row(y);
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].vertex < b[j].vertex)) {
      sum += a[i++].value;
    } else if (i == a.size() || b[j].vertex < a[i].vertex) {
      sum += b[j++].value;
    } else {
      sum += std::fabs(a[i++].value - b[j++].value);
    }
  }
  return sum;
}

std::vector<double> integer_coordinates(const FiniteSpace& s) {
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& label : s.labels()) {
    long long v = 0;
    const char* end = label.data() + label.size();
    auto [ptr, ec] = std::from_chars(label.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
      throw MalformedError("labels: '" + label + "' is not an integer");
    }
    out.push_back(static_cast<double>(v));
  }
  return out;
}

namespace {

std::string format_int(double v) {
  return std::to_string(static_cast<long long>(std::llround(v)));
}

// Builds a partition from per-point weights keyed by an integer node.
PartitionOfUnity from_keyed(const std::vector<std::vector<std::pair<long long, double>>>& keyed,
                            const std::string& prefix, double scale) {
  std::map<long long, std::size_t> slot;
  for (const auto& row : keyed) {
    for (const auto& [k, w] : row) slot.emplace(k, 0);
  }
  std::vector<std::string> vertices;
  for (auto& [k, idx] : slot) {
    idx = vertices.size();
    vertices.push_back(prefix + format_int(static_cast<double>(k) * scale));
  }
  std::vector<std::vector<Weight>> rows;
  for (const auto& row : keyed) {
    std::vector<Weight> r;
    for (const auto& [k, w] : row) r.push_back({slot.at(k), w});
    rows.push_back(std::move(r));
  }
  return PartitionOfUnity(std::move(vertices), std::move(rows));
}

void check_pitch(double pitch) {
  if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ParameterError("pitch: must be positive");
}

}  // namespace

PartitionOfUnity block_partition(std::span<const double> coords, double pitch) {
  check_pitch(pitch);
  std::vector<std::vector<std::pair<long long, double>>> keyed;
  for (double c : coords) {
    keyed.push_back({{static_cast<long long>(std::floor(c / pitch)), 1.0}});
  }
  return from_keyed(keyed, "b", 1.0);
}

PartitionOfUnity hat_partition(std::span<const double> coords, double pitch) {
  check_pitch(pitch);
  std::vector<std::vector<std::pair<long long, double>>> keyed;
  for (double c : coords) {
    const double cell = std::floor(c / pitch);
    const double frac = c / pitch - cell;
    const auto k = static_cast<long long>(cell);
    std::vector<std::pair<long long, double>> row;
    if (frac == 0.0) {
      row.push_back({k, 1.0});
    } else {
      row.push_back({k, 1.0 - frac});
      row.push_back({k + 1, frac});
    }
    keyed.push_back(std::move(row));
  }
  return from_keyed(keyed, "n", pitch);
}

PartitionOfUnity constant_partition(std::size_t points) {
  return PartitionOfUnity({"c"}, std::vector<std::vector<Weight>>(points, {{0, 1.0}}));
}

VariationResult variation(const PartitionOfUnity& phi, const Family& u) {
  if (u.universe() != phi.size()) throw MalformedError("u: universe does not match the partition");
  const auto& members = u.members();
  std::vector<VariationResult> per(members.size());
  parallel_for(members.size(), [&](std::size_t m) {
    const auto& pts = members[m];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = l1_distance(phi, pts[i], pts[j]);
        if (d > per[m].value) per[m] = {d, std::make_pair(pts[i], pts[j])};
      }
    }
  });
  VariationResult out;
  for (const auto& r : per) {
    if (r.value > out.value) out = r;
  }
  return out;
}

void validate_folner_set(std::span<const GroupElement> e) {
  if (e.empty()) throw MalformedError("E: must not be empty");
  std::unordered_set<GroupElement, ElementHash> seen;
  for (const auto& k : e) {
    if (!seen.insert(k).second) {
      throw MalformedError("E: element '" + k.to_string() + "' repeats on the core");
    }
  }
}

double folner_ratio(const GroupAction& action, std::span<const GroupElement> e,
                    const GroupElement& g, const GroupElement& h) {
  validate_folner_set(e);
  std::unordered_set<GroupElement, ElementHash> eg, eh;
  for (const auto& k : e) {
    eg.insert(action.compose(k, g));
    eh.insert(action.compose(k, h));
  }
  std::size_t diff = 0;
  for (const auto& x : eg) diff += eh.count(x) == 0;
  for (const auto& x : eh) diff += eg.count(x) == 0;
  return static_cast<double>(diff) / static_cast<double>(e.size());
}

double folner_defect(const GroupAction& action, std::span<const GroupElement> e,
                     const GroupElement& g) {
  return folner_ratio(action, e, g, action.identity());
}

PartitionOfUnity folner_average(const PartitionOfUnity& phi, std::span<const GroupElement> e,
                                const GroupAction& action) {
  validate_folner_set(e);
  const std::size_t n = phi.size();
  if (n != action.space().size()) throw MalformedError("phi: point count does not match the space");
  const double scale = 1.0 / static_cast<double>(e.size());
  std::vector<std::vector<Weight>> rows(n);
  parallel_for(n, [&](std::size_t x) {
    std::map<std::size_t, double> acc;
    for (const auto& k : e) {
      for (const auto& w : phi.row(k(x))) acc[w.vertex] += w.value;
    }
    for (const auto& [v, w] : acc) rows[x].push_back({v, w * scale});
  });
  return PartitionOfUnity(phi.vertices(), std::move(rows));
}

Family support_family(const PartitionOfUnity& phi) {
  std::vector<PointSet> members(phi.vertices().size());
  for (PointIndex x = 0; x < phi.size(); ++x) {
    for (const auto& w : phi.row(x)) members[w.vertex].push_back(x);
  }
  std::erase_if(members, [](const PointSet& m) { return m.empty(); });
  return Family(phi.size(), std::move(members));
}

ExactnessResult exactness_witness_check(const FiniteSpace& s, const PartitionOfUnity& phi,
                                        const Family& u, double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon: must be positive");
  if (phi.size() != s.size()) throw MalformedError("phi: point count does not match the space");
  ExactnessResult out;
  std::vector<PointSet> supports(phi.vertices().size());
  for (PointIndex x = 0; x < phi.size(); ++x) {
    for (const auto& w : phi.row(x)) supports[w.vertex].push_back(x);
  }
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const double d = s.diameter(supports[i]);
    if (d > out.support_mesh) {
      out.support_mesh = d;
      out.widest_vertex = i;
    }
  }
  const auto var = variation(phi, u);
  out.variation = var.value;
  out.variation_pair = var.pair;
  out.core_diameter = s.diameter(s.core());
  if (out.variation >= epsilon) {
    out.verdict = Verdict::fails;
  } else if (out.support_mesh >= out.core_diameter && out.core_diameter > 0.0) {
    out.verdict = Verdict::inconclusive;
  } else {
    out.verdict = Verdict::holds_on_window;
  }
  return out;
}

Verdict support_growth(std::span<const ExactnessResult> windows) {
  if (windows.size() < 2) return Verdict::inconclusive;
  return windows.back().support_mesh > windows.front().support_mesh + kTolerance
             ? Verdict::fails
             : Verdict::holds_on_window;
}

}  // namespace coarselab
