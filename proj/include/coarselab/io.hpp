#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarselab/action.hpp"
#include "coarselab/family.hpp"
#include "coarselab/propa.hpp"
#include "coarselab/roeops.hpp"
#include "coarselab/space.hpp"

namespace coarselab {

using Json = nlohmann::json;

// Parses a UTF-8 JSON file; failures become MalformedError naming the path.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text, const std::string& origin);

// Sorted keys, no whitespace, non-integral numbers printed with %.9g.
std::string canonical_dump(const Json& j);

// Point ids may be strings or integers in files; integer-looking labels are
// written back as integers.
std::string id_from_json(const Json& j, const std::string& field);
Json id_to_json(const std::string& label);

// Infinity is written as "inf"; "inf", "infinity" and null are accepted.
double distance_from_json(const Json& j, const std::string& field);
Json distance_to_json(double d);

FiniteSpace space_from_json(const Json& j);
Json space_to_json(const FiniteSpace& s);

Family family_from_json(const Json& j, const FiniteSpace& s);
Json family_to_json(const Family& f, const FiniteSpace& s);

GroupAction action_from_json(const Json& j, std::shared_ptr<const FiniteSpace> s);
Json action_to_json(const GroupAction& a);

PartitionOfUnity partition_from_json(const Json& j, const FiniteSpace& s);
Json partition_to_json(const PartitionOfUnity& phi, const FiniteSpace& s);

BandOperator operator_from_json(const Json& j, const FiniteSpace& s);
Json operator_to_json(const BandOperator& t, const FiniteSpace& s);

// {"map": {"x": "y", ...}} sending every point of `from` into `to`.
std::vector<PointIndex> point_map_from_json(const Json& j, const FiniteSpace& from,
                                            const FiniteSpace& to);
Json point_map_to_json(std::span<const PointIndex> f, const FiniteSpace& from,
                       const FiniteSpace& to);

// {"fibers": {"x": "label", ...}} covering every point.
std::vector<std::string> fiber_map_from_json(const Json& j, const FiniteSpace& s);

Json point_set_to_json(std::span<const PointIndex> pts, const FiniteSpace& s);

}  // namespace coarselab
