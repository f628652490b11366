#include "coarselab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "coarselab/errors.hpp"
#include "coarselab/invariants.hpp"
#include "coarselab/metrics.hpp"
#include "coarselab/parallel.hpp"
#include "coarselab/spacegen.hpp"
#include "coarselab/tower.hpp"
#include "internal.hpp"

namespace coarselab::cli {
namespace {

using Clock = std::chrono::steady_clock;

// Everything a command may read; each subcommand binds the fields it uses.
struct Options {
  std::string space, action, codomain, map, op, op2, fibers, phi;
  std::string g = "", h = "e", elements, u = "ball:1", v = "ball:1";
  std::string kind, mode = "isometric", variant = "chain", tie = "shortlex";
  std::string action_kind, action_out;
  std::vector<std::string> seeds, spaces, codomains, maps;
  std::vector<double> radii, levels, weights;
  std::vector<std::int64_t> moduli;
  std::int64_t lo = 0, hi = 0, arms = 1, length = 1, mod = 0;
  std::size_t depth = 4, n_budget = 16, cap = kDefaultElementCap;
  double radius = 0.0, t = 0.0, s_budget = kInfinity, epsilon = 0.5;
  std::string base;
};

class Session {
 public:
  Session(std::vector<std::string> command, std::ostream& out)
      : out_(out), start_(Clock::now()) {
    manifest_.command = std::move(command);
  }

  std::string out_path, csv_path, svg_path, format = "json";
  Manifest& manifest() { return manifest_; }

  Json read(const std::string& path) {
    manifest_.inputs[path] = file_digest(path);
    return read_json_file(path);
  }

  std::shared_ptr<const FiniteSpace> space(const std::string& path) {
    auto it = spaces_.find(path);
    if (it != spaces_.end()) return it->second;
    auto s = std::make_shared<const FiniteSpace>(space_from_json(read(path)));
    spaces_.emplace(path, s);
    return s;
  }

  GroupAction action(const std::string& path, std::shared_ptr<const FiniteSpace> s) {
    return action_from_json(read(path), std::move(s));
  }

  void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("output: cannot write '" + path + "'");
    f << content;
  }

  void emit(Json report) {
    manifest_.wall_time_s =
        std::chrono::duration<double>(Clock::now() - start_).count();
    report["manifest"] = manifest_.to_json();
    const std::string text =
        format == "text" ? render_text(report) : canonical_dump(report) + "\n";
    if (out_path.empty()) {
      out_ << text;
    } else {
      write_file(out_path, text);
    }
  }

  void emit_csv(const Table& t) {
    if (!csv_path.empty()) write_file(csv_path, render_csv(t));
  }

  void emit_svg(const std::string& title, const std::string& xl, const std::string& yl,
                const std::vector<Series>& s) {
    if (!svg_path.empty()) write_file(svg_path, render_svg(title, xl, yl, s));
  }

 private:
  std::ostream& out_;
  Clock::time_point start_;
  Manifest manifest_;
  std::map<std::string, std::shared_ptr<const FiniteSpace>> spaces_;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<GroupElement> parse_elements(const GroupAction& a, const std::string& text,
                                         const std::string& field) {
  std::vector<GroupElement> out;
  for (const auto& w : split(text, ',')) out.push_back(a.parse_element(w));
  if (out.empty()) throw ParameterError(field + ": expected a comma-separated element list");
  return out;
}

double parse_number(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParameterError(field + ": '" + text + "' is not a number");
}

// "singletons", "ball:<r>" or a Family JSON file.
Family family_spec(Session& session, const std::string& spec, const FiniteSpace& s,
                   const std::string& field) {
  if (spec == "singletons") return Family::singletons(s.size());
  if (spec.rfind("ball:", 0) == 0) return ball_cover(s, parse_number(spec.substr(5), field));
  return family_from_json(session.read(spec), s);
}

// "hat:<L>", "block:<L>", "constant" or a partition JSON file.
PartitionOfUnity partition_spec(Session& session, const std::string& spec, const FiniteSpace& s) {
  if (spec == "constant") return constant_partition(s.size());
  if (spec.rfind("hat:", 0) == 0) {
    return hat_partition(integer_coordinates(s), parse_number(spec.substr(4), "phi"));
  }
  if (spec.rfind("block:", 0) == 0) {
    return block_partition(integer_coordinates(s), parse_number(spec.substr(6), "phi"));
  }
  return partition_from_json(session.read(spec), s);
}

Json element_json(const GroupElement& g) { return g.to_string(); }

Json elements_json(std::span<const GroupElement> gs) {
  Json out = Json::array();
  for (const auto& g : gs) out.push_back(element_json(g));
  return out;
}

Json number_json(double v) { return distance_to_json(v); }

Json ball_json(const BallSet& b, const FiniteSpace& s) {
  return Json{{"points", point_set_to_json(b.points, s)},
              {"radius", b.radius < 0.0 ? Json(nullptr) : number_json(b.radius)}};
}

int verdict_code(Verdict v) { return v == Verdict::fails ? 1 : 0; }

using Command = std::function<int(Session&)>;

struct Builder {
  Options& o;
  Command& selected;

  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& help, Command cmd) {
    auto* app = parent->add_subcommand(name, help);
    app->callback([this, cmd] { selected = cmd; });
    return app;
  }
};

void add_space(CLI::App& root, Builder& b) {
  Options& o = b.o;
  auto* space = root.add_subcommand("space", "generate and validate spaces");
  space->require_subcommand(1);

  auto* gen = b.leaf(space, "gen", "generate an example space", [&o](Session& s) {
    Json report;
    std::shared_ptr<const FiniteSpace> out;
    std::optional<GroupAction> act;
    if (o.kind == "segment") {
      out = std::make_shared<const FiniteSpace>(segment_space(o.lo, o.hi));
      if (o.action_kind == "negation") act = negation_action(out);
      if (o.action_kind == "translation") act = translation_action(out);
      if (!o.action_kind.empty() && !act) {
        throw ParameterError("action: expected negation or translation");
      }
    } else if (o.kind == "axes") {
      out = std::make_shared<const FiniteSpace>(axes_space(o.arms, o.length));
    } else if (o.kind == "cone") {
      if (o.base.empty()) throw ParameterError("base: required for --kind cone");
      ConeSpec spec{*s.space(o.base), o.levels, o.weights};
      out = std::make_shared<const FiniteSpace>(cone_space(spec));
    } else if (o.kind == "box") {
      BoxSpace box = box_space(z_box_spec(o.moduli));
      out = box.space;
      act = box.action;
      Json weights = Json::array();
      for (double w : box.inter_level_weights) weights.push_back(number_json(w));
      report["inter_level_weights"] = weights;
    } else {
      throw ParameterError("kind: expected segment, axes, cone or box");
    }
    if (act && !o.action_out.empty()) {
      s.write_file(o.action_out, canonical_dump(action_to_json(*act)) + "\n");
    }
    Json js = space_to_json(*out);
    for (auto& [k, v] : js.items()) report[k] = v;
    s.emit(std::move(report));
    return 0;
  });
  gen->add_option("--kind", o.kind, "segment, axes, cone or box")->required();
  gen->add_option("--lo", o.lo, "segment: lowest integer");
  gen->add_option("--hi", o.hi, "segment: highest integer");
  gen->add_option("--arms", o.arms, "axes: number of arms");
  gen->add_option("--length", o.length, "axes: arm length");
  gen->add_option("--base", o.base, "cone: base space file");
  gen->add_option("--levels", o.levels, "cone: levels starting at 0")->delimiter(',');
  gen->add_option("--weights", o.weights, "cone: Phi at each level")->delimiter(',');
  gen->add_option("--moduli", o.moduli, "box: ascending moduli, each dividing the next")
      ->delimiter(',');
  gen->add_option("--action", o.action_kind, "segment: negation or translation");
  gen->add_option("--action-out", o.action_out, "write the generated action here");

  auto* validate = b.leaf(space, "validate", "check the metric axioms", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const AxiomReport r = check_metric_axioms(*sp);
    Json report{{"ok", r.ok},
                {"points", sp->size()},
                {"triples_checked", r.triples_checked},
                {"window_radius", number_json(sp->window_radius())},
                {"core_size", sp->core().size()}};
    if (r.violation) {
      static const char* kinds[] = {"nonzero_diagonal", "asymmetric", "negative", "triangle"};
      const auto& v = *r.violation;
      report["violation"] = {{"kind", kinds[static_cast<int>(v.kind)]},
                             {"x", id_to_json(sp->label(v.x))},
                             {"y", id_to_json(sp->label(v.y))},
                             {"z", id_to_json(sp->label(v.z))},
                             {"excess", v.excess}};
    }
    s.emit(std::move(report));
    return r.ok ? 0 : 1;
  });
  validate->add_option("--space", o.space, "space file")->required();
}

void add_action(CLI::App& root, Builder& b) {
  Options& o = b.o;
  auto* action = root.add_subcommand("action", "inspect group actions");
  action->require_subcommand(1);
  auto* validate = b.leaf(action, "validate", "load and validate an action", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    Json gens = Json::object();
    for (const auto& g : a.generators()) {
      gens[g.symbol] = {{"inverse", g.inverse}, {"control", number_json(g.control)}};
    }
    s.emit(Json{{"generators", gens},
                {"isometric", a.is_isometric()},
                {"max_control", number_json(a.max_control())},
                {"core_radius", number_json(sp->window_radius())}});
    return 0;
  });
  validate->add_option("--space", o.space, "space file")->required();
  validate->add_option("--action", o.action, "action file")->required();
}

void add_metric(CLI::App& root, Builder& b) {
  Options& o = b.o;
  auto* metric = root.add_subcommand("metric", "derived metrics");
  metric->require_subcommand(1);

  auto* xg = b.leaf(metric, "xg", "metric inducing the X_G structure", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    XgMode mode;
    if (o.mode == "isometric") {
      mode = XgMode::isometric;
    } else if (o.mode == "general") {
      mode = XgMode::general;
    } else {
      throw ParameterError("mode: expected isometric or general");
    }
    Json report = space_to_json(xg_metric(a, mode));
    report["mode"] = o.mode;
    s.emit(std::move(report));
    return 0;
  });
  xg->add_option("--space", o.space, "space file")->required();
  xg->add_option("--action", o.action, "action file")->required();
  xg->add_option("--mode", o.mode, "isometric (default) or general");

  auto* orbit = b.leaf(metric, "orbit", "metric on orbits of a finite group", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    OrbitMetricKind kind;
    if (o.kind == "hausdorff") {
      kind = OrbitMetricKind::hausdorff;
    } else if (o.kind == "hausdorff_classical") {
      kind = OrbitMetricKind::hausdorff_classical;
    } else if (o.kind == "min") {
      kind = OrbitMetricKind::min;
    } else {
      throw ParameterError("kind: expected hausdorff, hausdorff_classical or min");
    }
    const OrbitMetric m = orbit_metric(a, kind, o.cap);
    Json report = space_to_json(m.metric);
    Json orbits = Json::array();
    for (const auto& orb : m.orbits) orbits.push_back(point_set_to_json(orb, *sp));
    report["orbits"] = orbits;
    report["kind"] = o.kind;
    s.emit(std::move(report));
    return 0;
  });
  orbit->add_option("--space", o.space, "space file")->required();
  orbit->add_option("--action", o.action, "action file")->required();
  orbit->add_option("--kind", o.kind, "hausdorff, hausdorff_classical or min")
      ->default_val("hausdorff");
  orbit->add_option("--cap", o.cap, "maximum number of group elements to enumerate");

  auto* quotient = b.leaf(metric, "quotient", "quotient pseudometric of a fiber map", [&o](Session& s) {
    const auto sp = s.space(o.space);
    std::vector<std::string> fibers;
    if (!o.fibers.empty()) {
      fibers = fiber_map_from_json(s.read(o.fibers), *sp);
    } else if (o.mod > 0) {
      const auto coords = integer_coordinates(*sp);
      for (double c : coords) {
        const auto v = static_cast<std::int64_t>(c);
        fibers.push_back(std::to_string(((v % o.mod) + o.mod) % o.mod));
      }
    } else {
      throw ParameterError("fibers: give --fibers FILE or --mod k");
    }
    QuotientVariant variant;
    if (o.variant == "chain") {
      variant = QuotientVariant::chain;
    } else if (o.variant == "classical") {
      variant = QuotientVariant::classical;
    } else {
      throw ParameterError("variant: expected classical or chain");
    }
    const QuotientMetric q = quotient_pseudometric(*sp, fibers, variant);
    Json report = space_to_json(q.metric);
    report["variant"] = o.variant;
    s.emit(std::move(report));
    return 0;
  });
  quotient->add_option("--space", o.space, "space file")->required();
  quotient->add_option("--fibers", o.fibers, "fiber map file");
  quotient->add_option("--mod", o.mod, "integer labels modulo k");
  quotient->add_option("--variant", o.variant, "chain (default) or classical");

  auto* tower = b.leaf(metric, "tower", "scale tower metrization", [&o](Session& s) {
    const auto sp = s.space(o.space);
    std::vector<Family> seeds;
    for (const auto& spec : o.seeds) seeds.push_back(family_spec(s, spec, *sp, "seed"));
    const TowerMetric t = tower_metrize(*sp, seeds, o.depth);
    Json report = space_to_json(t.metric);
    Json first = Json::array();
    for (PointIndex i = 0; i < sp->size(); ++i) {
      Json row = Json::array();
      for (double v : t.first_level.row(i)) row.push_back(number_json(v));
      first.push_back(row);
    }
    report["first_level"] = first;
    report["levels"] = t.tower.levels.size();
    report["stabilized"] = t.tower.stabilized;
    s.emit(std::move(report));
    return 0;
  });
  tower->add_option("--space", o.space, "space file")->required();
  tower->add_option("--seed", o.seeds, "seed family: singletons, ball:r or a file");
  tower->add_option("--depth", o.depth, "number of levels");
}

void add_check(CLI::App& root, Builder& b) {
  Options& o = b.o;
  auto* check = root.add_subcommand("check", "windowed verdicts");
  check->require_subcommand(1);

  auto* discont = b.leaf(check, "discont", "coarse discontinuity profile", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const GroupElement g = a.parse_element(o.g);
    const auto r = discontinuity_profile(a, g, o.radii);
    Json profile = Json::array();
    Table table{{"radius", "min_displacement"}, {}};
    Series series{"min displacement", {}};
    for (const auto& row : r.profile) {
      profile.push_back({number_json(row.radius), number_json(row.min_displacement)});
      table.rows.push_back({format_number(row.radius), format_number(row.min_displacement)});
      series.points.push_back({row.radius, row.min_displacement});
    }
    Json results = Json::array();
    int code = 0;
    for (const auto& res : r.results) {
      Json j{{"R", number_json(res.radius)},
             {"K", point_set_to_json(res.k, *sp)},
             {"allowed_radius", number_json(res.allowed_radius)},
             {"verdict", to_string(res.verdict)}};
      if (res.counterexample) j["counterexample"] = id_to_json(sp->label(*res.counterexample));
      results.push_back(j);
      code = std::max(code, verdict_code(res.verdict));
    }
    s.emit_csv(table);
    s.emit_svg("displacement profile of " + g.to_string(), "radius", "min d(x, g.x)", {series});
    s.emit(Json{{"element", element_json(g)},
                {"profile", profile},
                {"results", results},
                {"core_radius", number_json(sp->window_radius())}});
    return code;
  });
  discont->add_option("--space", o.space, "space file")->required();
  discont->add_option("--action", o.action, "action file")->required();
  discont->add_option("--g", o.g, "element, e.g. gamma or a.b")->required();
  discont->add_option("--radii", o.radii, "comma-separated radii")->delimiter(',')->required();

  auto* sep = b.leaf(check, "separation", "separation bound for a finite set", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto fs = parse_elements(a, o.elements, "F");
    const Family u = family_spec(s, o.u, *sp, "u");
    const Family v = family_spec(s, o.v, *sp, "v");
    const auto r = separation_bound(a, fs, u, v);
    Json report{{"K", ball_json(r.k, *sp)},
                {"elements", elements_json(r.elements)},
                {"verdict", to_string(r.verdict)},
                {"core_radius", number_json(sp->window_radius())}};
    if (r.farthest) {
      report["farthest_violation"] = {{"x", id_to_json(sp->label(r.farthest->x))},
                                      {"y", id_to_json(sp->label(r.farthest->y))},
                                      {"g1", element_json(r.elements[r.farthest->g1])},
                                      {"g2", element_json(r.elements[r.farthest->g2])}};
    }
    s.emit(std::move(report));
    return verdict_code(r.verdict);
  });
  sep->add_option("--space", o.space, "space file")->required();
  sep->add_option("--action", o.action, "action file")->required();
  sep->add_option("--F", o.elements, "comma-separated elements")->required();
  sep->add_option("--u", o.u, "family: singletons, ball:r or a file");
  sep->add_option("--v", o.v, "family: singletons, ball:r or a file");

  auto* ends = b.leaf(check, "one-ended", "coarse one-endedness at scale u", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const Family u = family_spec(s, o.u, *sp, "u");
    const auto results = one_ended_check(*sp, u, o.radii);
    Json rows = Json::array();
    Table table{{"radius", "verdict", "connected_from", "components"}, {}};
    int code = 0;
    for (const auto& r : results) {
      Json j{{"radius", number_json(r.radius)},
             {"verdict", to_string(r.verdict)},
             {"components", r.components},
             {"connected_from", r.connected_from ? number_json(*r.connected_from) : Json(nullptr)}};
      if (r.counterexample) {
        j["counterexample"] = {id_to_json(sp->label(r.counterexample->first)),
                               id_to_json(sp->label(r.counterexample->second))};
      }
      rows.push_back(j);
      table.rows.push_back({format_number(r.radius), to_string(r.verdict),
                            r.connected_from ? format_number(*r.connected_from) : "",
                            std::to_string(r.components)});
      code = std::max(code, verdict_code(r.verdict));
    }
    s.emit_csv(table);
    s.emit(Json{{"results", rows},
                {"mesh_u", number_json(mesh(u, *sp))},
                {"core_radius", number_json(sp->window_radius())}});
    return code;
  });
  ends->add_option("--space", o.space, "space file")->required();
  ends->add_option("--u", o.u, "family: singletons, ball:r or a file");
  ends->add_option("--radii", o.radii, "hole radii")->delimiter(',')->required();

  auto* light = b.leaf(check, "light", "coarse lightness of a map", [&o](Session& s) {
    if (o.spaces.size() != o.maps.size() || o.spaces.size() != o.codomains.size()) {
      throw ParameterError("space: give one --space, --codomain and --map per window");
    }
    std::vector<LightnessResult> results;
    Json windows = Json::array();
    for (std::size_t i = 0; i < o.spaces.size(); ++i) {
      const auto dom = s.space(o.spaces[i]);
      const auto cod = s.space(o.codomains[i]);
      const auto f = point_map_from_json(s.read(o.maps[i]), *dom, *cod);
      const Family u = family_spec(s, o.u, *dom, "u");
      const Family v = family_spec(s, o.v, *cod, "v");
      results.push_back(coarsely_light_check(*dom, f, u, v));
      windows.push_back({{"space", o.spaces[i]},
                         {"max_diameter", number_json(results.back().max_diameter)},
                         {"worst_component", point_set_to_json(results.back().worst_component, *dom)}});
    }
    const Verdict verdict = lightness_growth(results);
    s.emit(Json{{"windows", windows}, {"verdict", to_string(verdict)}});
    return verdict_code(verdict);
  });
  light->add_option("--space", o.spaces, "domain space file (repeat per window)")->required();
  light->add_option("--codomain", o.codomains, "codomain space file (repeat per window)")->required();
  light->add_option("--map", o.maps, "point map file (repeat per window)")->required();
  light->add_option("--u", o.u, "family on the domain");
  light->add_option("--v", o.v, "family on the codomain");

  auto* weak = b.leaf(check, "weak-quotient", "chain certificate for a weak coarse quotient",
                      [&o](Session& s) {
    const auto x = s.space(o.space);
    const auto y = s.space(o.codomain);
    const auto f = point_map_from_json(s.read(o.map), *x, *y);
    const auto r = weak_quotient_certificate(*x, *y, f, o.t, o.radii, o.n_budget, o.s_budget);
    Json rows = Json::array();
    Table table{{"R", "n", "S"}, {}};
    for (const auto& row : r.rows) {
      Json chain = Json::array();
      for (const auto& l : row.witness) {
        chain.push_back({id_to_json(x->label(l.a)), id_to_json(x->label(l.b))});
      }
      rows.push_back({{"R", number_json(row.radius)},
                      {"n", row.n},
                      {"S", number_json(row.s)},
                      {"pair", {id_to_json(y->label(row.y)), id_to_json(y->label(row.y2))}},
                      {"witness", chain}});
      table.rows.push_back({format_number(row.radius), std::to_string(row.n), format_number(row.s)});
    }
    Json report{{"rows", rows}, {"verdict", to_string(r.verdict)}, {"T", number_json(o.t)}};
    if (r.uncovered) report["uncovered"] = id_to_json(y->label(*r.uncovered));
    if (r.failing_pair) {
      report["failing_pair"] = {id_to_json(y->label(r.failing_pair->first)),
                                id_to_json(y->label(r.failing_pair->second))};
      report["failing_radius"] = number_json(*r.failing_radius);
    }
    s.emit_csv(table);
    s.emit(std::move(report));
    return verdict_code(r.verdict);
  });
  weak->add_option("--space", o.space, "domain space file")->required();
  weak->add_option("--codomain", o.codomain, "codomain space file")->required();
  weak->add_option("--map", o.map, "point map file")->required();
  weak->add_option("--T", o.t, "closeness tolerance");
  weak->add_option("--radii", o.radii, "radii R")->delimiter(',')->required();
  weak->add_option("--n-budget", o.n_budget, "largest admissible chain length");
  weak->add_option("--s-budget", o.s_budget, "largest admissible link length");

  auto* identify = b.leaf(check, "identify", "recover the group element a map is close to",
                          [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto f = point_map_from_json(s.read(o.map), *sp, *sp);
    const auto fs = parse_elements(a, o.elements, "F");
    const Family v = family_spec(s, o.v, *sp, "v");
    const Family u = family_spec(s, o.u, *sp, "u");
    const auto r = identify_group_element(f, a, v, fs, u);
    Json report{{"status", r.unique ? "unique" : "ambiguous"},
                {"candidates", elements_json(r.candidates)},
                {"element", r.element ? element_json(*r.element) : Json(nullptr)},
                {"exceptional", point_set_to_json(r.exceptional, *sp)},
                {"K", ball_json(r.k, *sp)},
                {"K_prime", ball_json(r.k_prime, *sp)},
                {"one_ended", to_string(r.one_ended)},
                {"components", r.components},
                {"core_radius", number_json(sp->window_radius())}};
    s.emit(std::move(report));
    return r.unique ? 0 : 1;
  });
  identify->add_option("--space", o.space, "space file")->required();
  identify->add_option("--action", o.action, "action file")->required();
  identify->add_option("--map", o.map, "self-map file")->required();
  identify->add_option("--F", o.elements, "comma-separated elements")->required();
  identify->add_option("--v", o.v, "closeness family");
  identify->add_option("--u", o.u, "connectivity family");
}

void add_propa(CLI::App& root, Builder& b) {
  Options& o = b.o;
  auto* propa = root.add_subcommand("propa", "partitions of unity and Folner sets");
  propa->require_subcommand(1);

  auto* var = b.leaf(propa, "variation", "l1 variation at scale u", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const auto phi = partition_spec(s, o.phi, *sp);
    const auto r = variation(phi, family_spec(s, o.u, *sp, "u"));
    Json report{{"variation", r.value}};
    if (r.pair) {
      report["pair"] = {id_to_json(sp->label(r.pair->first)), id_to_json(sp->label(r.pair->second))};
    }
    s.emit(std::move(report));
    return 0;
  });
  var->add_option("--space", o.space, "space file")->required();
  var->add_option("--phi", o.phi, "hat:L, block:L, constant or a partition file")->required();
  var->add_option("--u", o.u, "family");

  auto* defect = b.leaf(propa, "defect", "Folner defect |E.g Δ E.h| / |E|", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto es = parse_elements(a, o.elements, "E");
    const GroupElement g = a.parse_element(o.g);
    const GroupElement h = a.parse_element(o.h);
    s.emit(Json{{"defect", folner_ratio(a, es, g, h)},
                {"E_size", es.size()},
                {"g", element_json(g)},
                {"h", element_json(h)}});
    return 0;
  });
  defect->add_option("--space", o.space, "space file")->required();
  defect->add_option("--action", o.action, "action file")->required();
  defect->add_option("--E", o.elements, "comma-separated elements")->required();
  defect->add_option("--g", o.g, "element")->required();
  defect->add_option("--h", o.h, "second element (default e)");

  auto* avg = b.leaf(propa, "average", "average a partition over E", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto phi = partition_spec(s, o.phi, *sp);
    const auto es = parse_elements(a, o.elements, "E");
    s.emit(partition_to_json(folner_average(phi, es, a), *sp));
    return 0;
  });
  avg->add_option("--space", o.space, "space file")->required();
  avg->add_option("--action", o.action, "action file")->required();
  avg->add_option("--phi", o.phi, "hat:L, block:L, constant or a partition file")->required();
  avg->add_option("--E", o.elements, "comma-separated elements")->required();

  auto* witness = b.leaf(propa, "witness", "check an exactness witness", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const auto phi = partition_spec(s, o.phi, *sp);
    const auto r = exactness_witness_check(*sp, phi, family_spec(s, o.u, *sp, "u"), o.epsilon);
    Json report{{"support_mesh", number_json(r.support_mesh)},
                {"widest_vertex", id_to_json(phi.vertices().empty() ? "" : phi.vertices()[r.widest_vertex])},
                {"variation", r.variation},
                {"epsilon", o.epsilon},
                {"core_diameter", number_json(r.core_diameter)},
                {"verdict", to_string(r.verdict)}};
    s.emit(std::move(report));
    return verdict_code(r.verdict);
  });
  witness->add_option("--space", o.space, "space file")->required();
  witness->add_option("--phi", o.phi, "hat:L, block:L, constant or a partition file")->required();
  witness->add_option("--u", o.u, "family");
  witness->add_option("--epsilon", o.epsilon, "variation bound");
}

void add_roe(CLI::App& root, Builder& b) {
  Options& o = b.o;
  auto* roe = root.add_subcommand("roe", "band operators");
  roe->require_subcommand(1);

  auto* prop = b.leaf(roe, "propagation", "propagation under d_X and X_G", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const auto t = operator_from_json(s.read(o.op), *sp);
    auto entry = [&](const PropagationResult& r) {
      Json j{{"value", number_json(r.value)}};
      if (r.pair) j["pair"] = {id_to_json(sp->label(r.pair->first)), id_to_json(sp->label(r.pair->second))};
      return j;
    };
    Json report{{"X", entry(propagation(t, *sp))}};
    if (!o.action.empty()) {
      const GroupAction a = s.action(o.action, sp);
      const XgMode mode = o.mode == "general" ? XgMode::general : XgMode::isometric;
      report["X_G"] = entry(propagation(t, xg_metric(a, mode)));
    }
    s.emit(std::move(report));
    return 0;
  });
  prop->add_option("--space", o.space, "space file")->required();
  prop->add_option("--op", o.op, "operator file")->required();
  prop->add_option("--action", o.action, "action file for the X_G propagation");
  prop->add_option("--mode", o.mode, "X_G metric mode");

  auto* translate = b.leaf(roe, "translate", "translation operator M_g", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    s.emit(operator_to_json(translation_operator(a, a.parse_element(o.g)), *sp));
    return 0;
  });
  translate->add_option("--space", o.space, "space file")->required();
  translate->add_option("--action", o.action, "action file")->required();
  translate->add_option("--g", o.g, "element")->required();

  auto* conj = b.leaf(roe, "conjugate", "M_g T M_g^*", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto t = operator_from_json(s.read(o.op), *sp);
    s.emit(operator_to_json(conjugate(t, a, a.parse_element(o.g)), *sp));
    return 0;
  });
  conj->add_option("--space", o.space, "space file")->required();
  conj->add_option("--action", o.action, "action file")->required();
  conj->add_option("--op", o.op, "operator file")->required();
  conj->add_option("--g", o.g, "element")->required();

  auto tie_policy = [&o] {
    if (o.tie == "shortlex") return TiePolicy::shortlex;
    if (o.tie == "reverse") return TiePolicy::reverse_shortlex;
    throw ParameterError("tie: expected shortlex or reverse");
  };

  auto* dec = b.leaf(roe, "decompose", "write T as a sum of T_g M_g", [&o, tie_policy](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto t = operator_from_json(s.read(o.op), *sp);
    const auto fs = parse_elements(a, o.elements, "F");
    const auto d = decompose(t, a, o.radius, fs, tie_breaker(tie_policy()));
    Json terms = Json::object();
    for (std::size_t i = 0; i < d.elements.size(); ++i) {
      terms[d.elements[i].to_string()] = operator_to_json(d.terms[i], *sp);
    }
    const bool exact = recombine(d, a) == t;
    s.emit(Json{{"R", number_json(o.radius)},
                {"F", elements_json(d.elements)},
                {"terms", terms},
                {"recombines", exact},
                {"tie", o.tie}});
    return exact ? 0 : 1;
  });
  dec->add_option("--space", o.space, "space file")->required();
  dec->add_option("--action", o.action, "action file")->required();
  dec->add_option("--op", o.op, "operator file")->required();
  dec->add_option("--R", o.radius, "support radius")->required();
  dec->add_option("--F", o.elements, "comma-separated elements")->required();
  dec->add_option("--tie", o.tie, "shortlex (default) or reverse");

  auto* def = b.leaf(roe, "defect", "difference of two tie-breaking policies", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto t = operator_from_json(s.read(o.op), *sp);
    const auto fs = parse_elements(a, o.elements, "F");
    const auto d1 = decompose(t, a, o.radius, fs, tie_breaker(TiePolicy::shortlex));
    const auto d2 = decompose(t, a, o.radius, fs, tie_breaker(TiePolicy::reverse_shortlex));
    const auto r = uniqueness_defect(d1, d2, a);
    Json supports = Json::object();
    for (std::size_t i = 0; i < r.elements.size(); ++i) {
      Json list = Json::array();
      for (const auto& e : r.supports[i]) {
        list.push_back({id_to_json(sp->label(e.first)), id_to_json(sp->label(e.second))});
      }
      supports[r.elements[i].to_string()] = list;
    }
    s.emit(Json{{"supports", supports}, {"K", ball_json(r.k, *sp)}, {"verdict", to_string(r.verdict)}});
    return verdict_code(r.verdict);
  });
  def->add_option("--space", o.space, "space file")->required();
  def->add_option("--action", o.action, "action file")->required();
  def->add_option("--op", o.op, "operator file")->required();
  def->add_option("--R", o.radius, "support radius")->required();
  def->add_option("--F", o.elements, "comma-separated elements")->required();

  auto* hom = b.leaf(roe, "hom-check", "(T M_g)(S M_h) = (T g.S) M_gh", [&o](Session& s) {
    const auto sp = s.space(o.space);
    const GroupAction a = s.action(o.action, sp);
    const auto t = operator_from_json(s.read(o.op), *sp);
    const auto u = operator_from_json(s.read(o.op2), *sp);
    const auto r = homomorphism_check(t, u, a, a.parse_element(o.g), a.parse_element(o.h));
    s.emit(Json{{"holds", r.holds}, {"max_error", r.max_error}});
    return r.holds ? 0 : 1;
  });
  hom->add_option("--space", o.space, "space file")->required();
  hom->add_option("--action", o.action, "action file")->required();
  hom->add_option("--op", o.op, "operator T")->required();
  hom->add_option("--op2", o.op2, "operator S")->required();
  hom->add_option("--g", o.g, "element g")->required();
  hom->add_option("--h", o.h, "element h");
}

void collect_params(const CLI::App& app, std::map<std::string, std::string>& params) {
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0 || opt->get_single_name() == "help") continue;
    std::string joined;
    for (const auto& r : opt->results()) {
      if (!joined.empty()) joined += ',';
      joined += r;
    }
    params[opt->get_single_name()] = joined;
  }
  for (const CLI::App* sub : app.get_subcommands()) collect_params(*sub, params);
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

// First word naming no subcommand at its level, if any. Root flags taking
// a value are skipped together with their value.
std::optional<std::string> unknown_command(const CLI::App& root, const std::vector<std::string>& args) {
  static const std::set<std::string> valued{"--out", "--csv", "--svg", "--format", "--threads"};
  const CLI::App* level = &root;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (!a.empty() && a[0] == '-') {
      if (level == &root && valued.count(a)) ++i;
      if (level != &root) return std::nullopt;
      continue;
    }
    const auto subs = level->get_subcommands([](const CLI::App*) { return true; });
    if (subs.empty()) return std::nullopt;
    const CLI::App* next = nullptr;
    for (const CLI::App* sub : subs) {
      if (sub->get_name() == a) next = sub;
    }
    if (!next) return a;
    level = next;
  }
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  Command selected;
  Builder builder{opts, selected};
  CLI::App app{"Finite-window computations for large scale spaces and group actions", "coarselab"};
  // -h is left free for the --h element option.
  app.set_help_flag("--help", "print help and exit");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  // Global flags may also follow the subcommand.
  app.fallthrough();
  std::string out_path, csv_path, svg_path, format = "json";
  std::size_t threads = 0;
  app.add_option("--out", out_path, "write the report to a file");
  app.add_option("--csv", csv_path, "write a table as CSV (where available)");
  app.add_option("--svg", svg_path, "write a profile plot as SVG (where available)");
  app.add_option("--format", format, "json (default) or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", threads, "worker threads (default: all cores)");
  add_space(app, builder);
  add_action(app, builder);
  add_metric(app, builder);
  add_check(app, builder);
  add_propa(app, builder);
  add_roe(app, builder);

  if (auto bad = unknown_command(app, args)) {
    err << "error: command: unknown subcommand '" << *bad << "'\n";
    return 2;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 2;
  }
  if (!selected) {
    err << "error: no command selected\n";
    return 2;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    Session session(args, out);
    session.out_path = out_path;
    session.csv_path = csv_path;
    session.svg_path = svg_path;
    session.format = format;
    collect_params(app, session.manifest().params);
    return selected(session);
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 2;
  }
}

}  // namespace coarselab::cli
