#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

using Permutation = std::vector<PointIndex>;
using Word = std::vector<std::string>;

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

// A group element given by a word in the generators together with the
// bijection of the window it realizes.
//
// Two elements compare equal iff their bijections agree on the certified
// core of the space. On small windows distinct abstract elements can
// therefore be identified; reports always state the core radius.
class GroupElement {
 public:
  const Word& word() const { return word_; }
  const Permutation& realized() const { return realized_; }
  PointIndex operator()(PointIndex x) const { return realized_[x]; }
  // Images of the core points, in core order. This is the equality key.
  const std::vector<PointIndex>& core_key() const { return core_key_; }
  std::size_t length_of_word() const { return word_.size(); }

  // "e" for the empty word, otherwise symbols joined by '.'.
  std::string to_string() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.core_key_ == b.core_key_;
  }

 private:
  friend class GroupAction;
  GroupElement(Word word, Permutation realized, std::vector<PointIndex> core_key)
      : word_(std::move(word)), realized_(std::move(realized)), core_key_(std::move(core_key)) {}

  Word word_;
  Permutation realized_;
  std::vector<PointIndex> core_key_;
};

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    return PermutationHash{}(g.core_key());
  }
};

// Shortlex order on words: shorter first, then lexicographic by symbol.
bool shortlex_less(const Word& a, const Word& b);

struct Generator {
  std::string symbol;
  Permutation perm;
  std::string inverse;
  // max over x,y of d(s.x, s.y) - d(x,y); 0 for isometries, infinity when
  // a finite distance is sent to infinity.
  double control = 0.0;
};

// A finitely generated group acting on a window by bijections.
//
// The generating set is closed under formal inverses: declared inverse
// pairs are validated, involutions are their own inverse, and any missing
// inverse is added under the symbol "<s>^-1". Generators are kept sorted
// by symbol, which fixes the shortlex tie-breaking everywhere.
class GroupAction {
 public:
  GroupAction(std::shared_ptr<const FiniteSpace> space,
              std::vector<std::pair<std::string, Permutation>> tables,
              std::map<std::string, std::string> inverses = {});

  const FiniteSpace& space() const { return *space_; }
  const std::shared_ptr<const FiniteSpace>& space_ptr() const { return space_; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::optional<std::size_t> find_generator(const std::string& symbol) const;

  GroupElement identity() const;
  // Throws MalformedError for unknown symbols.
  GroupElement element(const Word& word) const;
  // Parses "e" or symbols separated by '.'.
  GroupElement parse_element(std::string_view text) const;
  // g o h: first h, then g. Words concatenate.
  GroupElement compose(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse(const GroupElement& g) const;

  bool is_isometric() const;
  double max_control() const;

 private:
  friend class ElementEnumerator;
  GroupElement make(Word word, Permutation perm) const;

  std::shared_ptr<const FiniteSpace> space_;
  std::vector<Generator> generators_;
};

// Breadth-first enumeration of the realized group in shortlex order.
// Elements are deduplicated by their action on the whole window, so every
// element is reported once with a shortlex-minimal word.
class ElementEnumerator {
 public:
  explicit ElementEnumerator(const GroupAction& action);

  // Elements of word length current_length(); advance() moves to the next
  // layer and returns false once the group is exhausted.
  const std::vector<GroupElement>& layer() const { return layer_; }
  std::size_t current_length() const { return length_; }
  bool advance();
  std::size_t discovered() const { return discovered_; }

 private:
  const GroupAction& action_;
  std::vector<GroupElement> layer_;
  std::size_t length_ = 0;
  std::size_t discovered_ = 0;
  std::unordered_set<Permutation, PermutationHash> seen_;
};

// Length of the shortest word realizing g (compared on the core), or
// nullopt when none has length <= bound.
std::optional<std::size_t> word_length(const GroupAction& action, const GroupElement& g,
                                       std::size_t bound);

struct GroupClosure {
  std::vector<GroupElement> elements;  // shortlex order, identity first
  std::vector<std::size_t> lengths;
};

inline constexpr std::size_t kDefaultElementCap = 1'000'000;

// The whole realized group. Throws NotFiniteError when more than `cap`
// elements are discovered.
GroupClosure enumerate_group(const GroupAction& action, std::size_t cap = kDefaultElementCap);

}  // namespace coarselab
