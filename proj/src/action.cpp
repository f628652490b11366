#include "coarselab/action.hpp"

#include <algorithm>
#include <cmath>

#include "coarselab/errors.hpp"

namespace coarselab {

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  // FNV-1a over the image indices.
  std::size_t h = 1469598103934665603ull;
  for (PointIndex v : p) {
    h ^= v + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

std::string GroupElement::to_string() const {
  if (word_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < word_.size(); ++i) {
    if (i) out += '.';
    out += word_[i];
  }
  return out;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

bool is_bijection(const Permutation& p) {
  std::vector<bool> hit(p.size(), false);
  for (PointIndex v : p) {
    if (v >= p.size() || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

Permutation invert(const Permutation& p) {
  Permutation inv(p.size());
  for (PointIndex i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

double control_value(const FiniteSpace& s, const Permutation& p) {
  double c = 0.0;
  const std::size_t n = s.size();
  for (PointIndex x = 0; x < n; ++x) {
    for (PointIndex y = x + 1; y < n; ++y) {
      const double before = s.dist(x, y);
      const double after = s.dist(p[x], p[y]);
      if (after == kInfinity) {
        if (before != kInfinity) return kInfinity;
        continue;
      }
      if (before == kInfinity) continue;
      c = std::max(c, after - before);
    }
  }
  return c;
}

}  // namespace

GroupAction::GroupAction(std::shared_ptr<const FiniteSpace> space,
                         std::vector<std::pair<std::string, Permutation>> tables,
                         std::map<std::string, std::string> inverses)
    : space_(std::move(space)) {
  if (!space_) throw MalformedError("space: missing");
  const std::size_t n = space_->size();
  std::map<std::string, Permutation> perms;
  for (auto& [symbol, perm] : tables) {
    if (symbol.empty() || symbol == "e" || symbol.find('.') != std::string::npos ||
        symbol.find(',') != std::string::npos) {
      throw MalformedError("generators: invalid symbol '" + symbol + "'");
    }
    if (perm.size() != n) {
      throw MalformedError("generators." + symbol + ": table has " + std::to_string(perm.size()) +
                           " entries for " + std::to_string(n) + " points");
    }
    if (!is_bijection(perm)) {
      throw MalformedError("generators." + symbol + ": table is not a bijection of the window");
    }
    if (!perms.emplace(symbol, std::move(perm)).second) {
      throw MalformedError("generators." + symbol + ": duplicate symbol");
    }
  }
  std::map<std::string, std::string> inv;
  for (const auto& [s, t] : inverses) {
    auto ps = perms.find(s);
    auto pt = perms.find(t);
    if (ps == perms.end()) throw MalformedError("inverses." + s + ": unknown generator");
    if (pt == perms.end()) throw MalformedError("inverses." + s + ": unknown inverse '" + t + "'");
    for (PointIndex x = 0; x < n; ++x) {
      if (ps->second[pt->second[x]] != x) {
        throw MalformedError("inverses." + s + ": '" + t + "' does not invert '" + s + "'");
      }
    }
    if (auto back = inv.find(t); back != inv.end() && back->second != s) {
      throw MalformedError("inverses." + t + ": conflicting inverse declarations");
    }
    inv[s] = t;
    inv[t] = s;
  }
  // Derive the missing inverses.
  std::vector<std::pair<std::string, Permutation>> added;
  for (const auto& [s, p] : perms) {
    if (inv.count(s)) continue;
    const Permutation ip = invert(p);
    std::optional<std::string> match;
    for (const auto& [t, q] : perms) {
      if (q == ip && (!inv.count(t) || inv[t] == s)) {
        match = t;
        break;
      }
    }
    if (match) {
      inv[s] = *match;
      inv[*match] = s;
    } else {
      const std::string name = s + "^-1";
      if (perms.count(name)) throw MalformedError("inverses." + s + ": cannot derive inverse symbol");
      inv[s] = name;
      inv[name] = s;
      added.emplace_back(name, ip);
    }
  }
  for (auto& [s, p] : added) perms.emplace(s, std::move(p));
  for (auto& [s, p] : perms) {
    Generator g;
    g.symbol = s;
    g.control = control_value(*space_, p);
    g.perm = std::move(p);
    g.inverse = inv.at(s);
    generators_.push_back(std::move(g));
  }
}

std::optional<std::size_t> GroupAction::find_generator(const std::string& symbol) const {
  auto it = std::lower_bound(generators_.begin(), generators_.end(), symbol,
                             [](const Generator& g, const std::string& s) { return g.symbol < s; });
  if (it == generators_.end() || it->symbol != symbol) return std::nullopt;
  return static_cast<std::size_t>(it - generators_.begin());
}

GroupElement GroupAction::make(Word word, Permutation perm) const {
  std::vector<PointIndex> key;
  key.reserve(space_->core().size());
  for (PointIndex c : space_->core()) key.push_back(perm[c]);
  return GroupElement(std::move(word), std::move(perm), std::move(key));
}

GroupElement GroupAction::identity() const {
  Permutation id(space_->size());
  for (PointIndex i = 0; i < id.size(); ++i) id[i] = i;
  return make({}, std::move(id));
}

GroupElement GroupAction::element(const Word& word) const {
  Permutation p(space_->size());
  for (PointIndex i = 0; i < p.size(); ++i) p[i] = i;
  // word s1 s2 ... sk acts as s1(s2(...sk(x))): apply from the right.
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto gi = find_generator(*it);
    if (!gi) throw MalformedError("element: unknown generator symbol '" + *it + "'");
    const Permutation& s = generators_[*gi].perm;
    for (auto& v : p) v = s[v];
  }
  return make(word, std::move(p));
}

GroupElement GroupAction::parse_element(std::string_view text) const {
  Word word;
  if (text.empty()) throw MalformedError("element: empty element text");
  if (text == "e") return identity();
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t dot = text.find('.', start);
    const std::size_t end = dot == std::string_view::npos ? text.size() : dot;
    if (end == start) throw MalformedError("element: empty symbol in '" + std::string(text) + "'");
    word.emplace_back(text.substr(start, end - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return element(word);
}

GroupElement GroupAction::compose(const GroupElement& g, const GroupElement& h) const {
  Permutation p(h.realized().size());
  for (PointIndex x = 0; x < p.size(); ++x) p[x] = g.realized()[h.realized()[x]];
  Word w = g.word();
  w.insert(w.end(), h.word().begin(), h.word().end());
  return make(std::move(w), std::move(p));
}

GroupElement GroupAction::inverse(const GroupElement& g) const {
  Word w;
  w.reserve(g.word().size());
  for (auto it = g.word().rbegin(); it != g.word().rend(); ++it) {
    w.push_back(generators_[*find_generator(*it)].inverse);
  }
  return make(std::move(w), invert(g.realized()));
}

bool GroupAction::is_isometric() const { return max_control() <= kTolerance; }

double GroupAction::max_control() const {
  double c = 0.0;
  for (const auto& g : generators_) c = std::max(c, g.control);
  return c;
}

ElementEnumerator::ElementEnumerator(const GroupAction& action) : action_(action) {
  layer_.push_back(action_.identity());
  seen_.insert(layer_.front().realized());
  discovered_ = 1;
}

bool ElementEnumerator::advance() {
  std::vector<GroupElement> next;
  for (const auto& g : layer_) {
    for (const auto& gen : action_.generators()) {
      Permutation p(g.realized().size());
      for (PointIndex x = 0; x < p.size(); ++x) p[x] = g.realized()[gen.perm[x]];
      if (seen_.count(p)) continue;
      seen_.insert(p);
      Word w = g.word();
      w.push_back(gen.symbol);
      next.push_back(action_.make(std::move(w), std::move(p)));
    }
  }
  if (next.empty()) {
    layer_.clear();
    return false;
  }
  discovered_ += next.size();
  layer_ = std::move(next);
  ++length_;
  return true;
}

std::optional<std::size_t> word_length(const GroupAction& action, const GroupElement& g,
                                       std::size_t bound) {
  ElementEnumerator en(action);
  while (true) {
    if (en.current_length() > bound) return std::nullopt;
    for (const auto& h : en.layer()) {
      if (h == g) return en.current_length();
    }
    if (!en.advance()) return std::nullopt;
  }
}

GroupClosure enumerate_group(const GroupAction& action, std::size_t cap) {
  GroupClosure out;
  ElementEnumerator en(action);
  do {
    for (const auto& h : en.layer()) {
      out.elements.push_back(h);
      out.lengths.push_back(en.current_length());
    }
    if (en.discovered() > cap) {
      throw NotFiniteError("group: more than " + std::to_string(cap) +
                           " elements realized on the window");
    }
  } while (en.advance());
  return out;
}

}  // namespace coarselab
