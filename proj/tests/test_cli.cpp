#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coarselab/cli.hpp"
#include "coarselab/errors.hpp"
#include "coarselab/io.hpp"
#include "coarselab/metrics.hpp"
#include "coarselab/propa.hpp"
#include "coarselab/roeops.hpp"
#include "coarselab/spacegen.hpp"
#include "support.hpp"

using namespace coarselab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Workdir {
 public:
  Workdir() {
    dir_ = fs::temp_directory_path() / ("coarselab-test-" + std::to_string(testing::base_seed()) + "-" +
                                        std::to_string(counter_++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

 private:
  static inline int counter_ = 0;
  fs::path dir_;
};

Json body(const std::string& text) {
  Json j = Json::parse(text);
  j.erase("manifest");
  return j;
}

}  // namespace

TEST_CASE("canonical dump") {
  const Json j = Json::parse(R"({"b": 1.5, "a": [1, 2.25, 0.1], "c": {"y": true, "x": null}})");
  CHECK(canonical_dump(j) == R"({"a":[1,2.25,0.1],"b":1.5,"c":{"x":null,"y":true}})");
  CHECK(canonical_dump(Json(1.0 / 3.0)) == "0.333333333");
  CHECK(canonical_dump(Json(kInfinity)) == "\"inf\"");
  CHECK(canonical_dump(distance_to_json(4.0)) == "4");
  CHECK(distance_from_json(Json("inf"), "d") == kInfinity);
  CHECK(distance_from_json(Json(nullptr), "d") == kInfinity);
  CHECK_THROWS_AS(distance_from_json(Json("far"), "d"), MalformedError);
}

TEST_CASE("space json round trip") {
  const FiniteSpace s = axes_space(3, 4);
  const FiniteSpace back = space_from_json(space_to_json(s));
  CHECK(back.size() == s.size());
  for (PointIndex x = 0; x < s.size(); ++x) {
    CHECK(back.label(x) == s.label(x));
    for (PointIndex y = 0; y < s.size(); ++y) CHECK(back.dist(x, y) == s.dist(x, y));
  }
  CHECK(back.window_radius() == s.window_radius());
  CHECK(back.basepoint() == s.basepoint());

  const Json graph = Json::parse(R"({"points": ["a", "b", "c", "d"],
    "metric": {"kind": "graph", "edges": [["a", "b", 1], ["b", "c", 2.5]]},
    "basepoint": "a", "window_radius": 3.5})");
  const FiniteSpace g = space_from_json(graph);
  CHECK(g.dist(0, 2) == 3.5);
  CHECK(g.dist(0, 3) == kInfinity);
  CHECK(canonical_dump(space_to_json(g)).find("\"inf\"") != std::string::npos);

  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"points": [1, 2], "metric": {"kind": "explicit",
    "rows": [[0, 1], [2, 0]]}, "basepoint": 1, "window_radius": 1})")), MalformedError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"points": [1], "basepoint": 1, "window_radius": 1})")),
                  MalformedError);
}

TEST_CASE("family, action, partition and operator round trips") {
  auto g = testing::rng(51);
  const auto s = testing::segment(-6, 6);
  const Family f = testing::random_family(g, s->size(), 5, 4);
  CHECK(family_from_json(family_to_json(f, *s), *s) == f);

  const GroupAction tr = translation_action(s);
  const GroupAction back = action_from_json(action_to_json(tr), s);
  REQUIRE(back.generators().size() == tr.generators().size());
  for (std::size_t i = 0; i < tr.generators().size(); ++i) {
    CHECK(back.generators()[i].symbol == tr.generators()[i].symbol);
    CHECK(back.generators()[i].perm == tr.generators()[i].perm);
    CHECK(back.generators()[i].inverse == tr.generators()[i].inverse);
  }

  const PartitionOfUnity hat = hat_partition(integer_coordinates(*s), 4);
  const PartitionOfUnity hp = partition_from_json(partition_to_json(hat, *s), *s);
  for (PointIndex x = 0; x < s->size(); ++x)
    for (std::size_t v = 0; v < hat.vertices().size(); ++v) CHECK(hp.value(x, v) == hat.value(x, v));

  BandOperator t(s->size());
  t.set(0, 3, {1.5, -2});
  t.set(4, 4, 7);
  CHECK(operator_from_json(operator_to_json(t, *s), *s) == t);
  CHECK(operator_from_json(Json::parse(R"({"entries": [[-6, -3, 1.5, -2], [-2, -2, 7]]})"), *s) == t);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"entries": [[-6, 99, 1]]})"), *s), MalformedError);
}

TEST_CASE("cli: documented examples") {
  Workdir w;
  auto gen = run({"space", "gen", "--kind", "segment", "--lo", "-10", "--hi", "10"});
  CHECK(gen.code == 0);
  const FiniteSpace seg = space_from_json(Json::parse(gen.out));
  CHECK(seg.size() == 21);

  const std::string z = w.path("z.json"), neg = w.path("neg.json");
  CHECK(run({"space", "gen", "--kind", "segment", "--lo", "-40", "--hi", "40", "--action", "negation",
             "--action-out", neg, "--out", z})
            .code == 0);
  const Run d = run({"check", "discont", "--space", z, "--action", neg, "--g", "gamma", "--radii", "2,7,20"});
  CHECK(d.code == 0);
  const Json rep = Json::parse(d.out);
  REQUIRE(rep["results"].size() == 3);
  for (const auto& r : rep["results"]) CHECK(r["verdict"] == "holds_on_window");
  CHECK(rep["results"][1]["K"] == Json::parse("[-3,-2,-1,0,1,2,3]"));

  const std::string op = w.write("t.json", R"({"entries": [[10, 30, 1]]})");
  const Run bad = run({"roe", "decompose", "--space", z, "--action", neg, "--op", op, "--R", "1", "--F", "e,gamma"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("(10, 30)") != std::string::npos);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);
}

TEST_CASE("cli: exit codes and diagnostics") {
  Workdir w;
  const std::string z = w.path("z.json"), tr = w.path("tr.json");
  CHECK(run({"space", "gen", "--kind", "segment", "--lo", "-20", "--hi", "20", "--action", "translation",
             "--action-out", tr, "--out", z})
            .code == 0);
  const Run fails = run({"check", "discont", "--space", z, "--action", tr, "--g", "+1", "--radii", "2"});
  CHECK(fails.code == 1);
  CHECK(Json::parse(fails.out)["results"][0]["verdict"] == "fails");

  const Run unknown = run({"bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("bogus") != std::string::npos);

  const std::string broken = w.write("broken.json", "{\"points\": [");
  const Run malformed = run({"space", "validate", "--space", broken});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("broken.json") != std::string::npos);

  const std::string asym = w.write("asym.json", R"({"points": [0, 1], "metric": {"kind": "explicit",
    "rows": [[0, 1], [2, 0]]}, "basepoint": 0, "window_radius": 1})");
  const Run axioms = run({"space", "validate", "--space", asym});
  CHECK(axioms.code == 2);
  CHECK(axioms.err.rfind("error: ", 0) == 0);

  CHECK(run({"check", "discont", "--space", z, "--action", tr, "--g", "e", "--radii", "2"}).code == 2);
  CHECK(run({"space", "gen", "--kind", "box", "--moduli", "3,8"}).code == 2);
  CHECK(run({"metric", "xg", "--space", z, "--action", tr}).code == 2);
  CHECK(run({"metric", "xg", "--space", z, "--action", tr, "--mode", "general"}).code == 0);
  CHECK(run({"--version"}).out.find(cli::kVersion) != std::string::npos);
}

TEST_CASE("cli: outputs match library values") {
  Workdir w;
  const std::string z = w.path("z.json"), neg = w.path("neg.json");
  run({"space", "gen", "--kind", "segment", "--lo", "-15", "--hi", "15", "--action", "negation", "--action-out", neg,
       "--out", z});
  const auto s = std::make_shared<const FiniteSpace>(space_from_json(read_json_file(z)));
  const GroupAction a = action_from_json(read_json_file(neg), s);

  const Run xg = run({"metric", "xg", "--space", z, "--action", neg});
  REQUIRE(xg.code == 0);
  const Json lib = space_to_json(xg_metric(a, XgMode::isometric));
  const Json cli_out = body(xg.out);
  for (auto it = lib.begin(); it != lib.end(); ++it) CHECK(canonical_dump(cli_out[it.key()]) == canonical_dump(*it));

  const Run q = run({"metric", "quotient", "--space", z, "--mod", "5", "--variant", "classical"});
  REQUIRE(q.code == 0);
  std::vector<std::string> fibers;
  for (PointIndex x = 0; x < s->size(); ++x) fibers.push_back(std::to_string(((std::stoi(s->label(x)) % 5) + 5) % 5));
  const auto qm = quotient_pseudometric(*s, fibers, QuotientVariant::classical);
  CHECK(canonical_dump(body(q.out)["metric"]) == canonical_dump(space_to_json(qm.metric)["metric"]));

  // The same invocation twice gives the same body.
  const Run again = run({"metric", "xg", "--space", z, "--action", neg});
  CHECK(canonical_dump(body(again.out)) == canonical_dump(cli_out));
  const Json manifest = Json::parse(xg.out)["manifest"];
  CHECK(manifest["version"] == cli::kVersion);
  CHECK(manifest["inputs"].size() == 2);
  CHECK(manifest["inputs"].begin()->get<std::string>().size() == 64);
}

TEST_CASE("cli: every subcommand runs") {
  Workdir w;
  const std::string z = w.path("z.json"), neg = w.path("neg.json"), ray = w.path("ray.json");
  run({"space", "gen", "--kind", "segment", "--lo", "-20", "--hi", "20", "--action", "negation", "--action-out", neg,
       "--out", z});
  run({"space", "gen", "--kind", "segment", "--lo", "0", "--hi", "20", "--out", ray});
  const std::string base = w.write("base.json", R"({"points": ["p", "q"], "metric": {"kind": "explicit",
    "rows": [[0, 1], [1, 0]]}, "basepoint": "p", "window_radius": 1})");
  const std::string op = w.write("op.json", R"({"entries": [[0, 0, 1], [1, -1, 2, 1], [3, 4, -1]]})");
  std::string fold;
  {
    Json m;
    for (int x = -20; x <= 20; ++x) m["map"][std::to_string(x)] = std::abs(x);
    fold = w.write("fold.json", m.dump());
  }
  const std::string ident = [&] {
    Json m;
    for (int x = 0; x <= 20; ++x) m["map"][std::to_string(x)] = x;
    return w.write("id.json", m.dump());
  }();
  const std::string flip = [&] {
    Json m;
    for (int x = -20; x <= 20; ++x) m["map"][std::to_string(x)] = -x;
    return w.write("flip.json", m.dump());
  }();
  const std::vector<std::vector<std::string>> ok{
      {"space", "gen", "--kind", "axes", "--arms", "3", "--length", "5"},
      {"space", "gen", "--kind", "cone", "--base", base, "--levels", "0,1,2", "--weights", "0,1,2"},
      {"space", "gen", "--kind", "box", "--moduli", "3,9"},
      {"space", "validate", "--space", z},
      {"action", "validate", "--space", z, "--action", neg},
      {"metric", "orbit", "--space", z, "--action", neg, "--kind", "min"},
      {"metric", "tower", "--space", z, "--seed", "ball:1", "--depth", "3"},
      {"check", "separation", "--space", z, "--action", neg, "--F", "e,gamma", "--u", "ball:1", "--v", "ball:1"},
      {"check", "one-ended", "--space", ray, "--radii", "3,5"},
      {"check", "light", "--space", z, "--codomain", ray, "--map", fold, "--u", "ball:1", "--v", "ball:1"},
      {"check", "weak-quotient", "--space", z, "--codomain", ray, "--map", fold, "--T", "0", "--radii", "1,3"},
      {"check", "identify", "--space", z, "--action", neg, "--map", flip, "--F", "e,gamma"},
      {"propa", "variation", "--space", z, "--phi", "hat:10"},
      {"propa", "defect", "--space", z, "--action", neg, "--E", "e,gamma", "--g", "gamma"},
      {"propa", "average", "--space", z, "--action", neg, "--phi", "hat:5", "--E", "e,gamma"},
      {"propa", "witness", "--space", z, "--phi", "hat:10", "--epsilon", "0.5"},
      {"roe", "propagation", "--space", z, "--op", op, "--action", neg},
      {"roe", "translate", "--space", z, "--action", neg, "--g", "gamma"},
      {"roe", "conjugate", "--space", z, "--action", neg, "--op", op, "--g", "gamma"},
      {"roe", "decompose", "--space", z, "--action", neg, "--op", op, "--R", "1", "--F", "e,gamma"},
      {"roe", "defect", "--space", z, "--action", neg, "--op", op, "--R", "1", "--F", "e,gamma"},
      {"roe", "hom-check", "--space", z, "--action", neg, "--op", op, "--op2", op, "--g", "gamma", "--h", "gamma"},
  };
  for (const auto& args : ok) {
    const Run r = run(args);
    INFO(args[0] << " " << args[1] << ": " << r.err);
    CHECK(r.code == 0);
    CHECK(Json::accept(r.out));
  }
  // weak-quotient on a map that is not coarsely surjective.
  const Run weak = run({"check", "weak-quotient", "--space", ray, "--codomain", z, "--map", ident, "--T", "0",
                        "--radii", "1"});
  CHECK(weak.code == 1);
}

TEST_CASE("cli: csv, svg and text outputs") {
  Workdir w;
  const std::string z = w.path("z.json"), neg = w.path("neg.json");
  run({"space", "gen", "--kind", "segment", "--lo", "-20", "--hi", "20", "--action", "negation", "--action-out", neg,
       "--out", z});
  const std::string csv = w.path("p.csv"), svg = w.path("p.svg");
  const Run r = run({"check", "discont", "--space", z, "--action", neg, "--g", "gamma", "--radii", "1,2,3,4",
                     "--csv", csv, "--svg", svg});
  CHECK(r.code == 0);
  std::ifstream c(csv);
  std::string header, first;
  std::getline(c, header);
  std::getline(c, first);
  CHECK(header.find(',') != std::string::npos);
  CHECK(first.rfind("1,2", 0) == 0);
  std::stringstream sv;
  sv << std::ifstream(svg).rdbuf();
  CHECK(sv.str().find("<svg") != std::string::npos);
  CHECK(sv.str().find("polyline") != std::string::npos);
  const Run t = run({"check", "separation", "--space", z, "--action", neg, "--F", "e,gamma", "--format", "text"});
  CHECK(t.code == 0);
  CHECK(t.out.find("verdict") != std::string::npos);
  CHECK(t.out.find('{') == std::string::npos);
}
