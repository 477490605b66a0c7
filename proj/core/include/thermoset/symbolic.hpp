#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace thermoset {

/// A finite word over the alphabet {1, ..., p}.
using Word = std::vector<int>;

std::string to_string(std::span<const int> word);

/// True when `needle` occurs as a contiguous sub-word of `hay`.
bool contains_subword(std::span<const int> hay, std::span<const int> needle);

/// Alphabet size plus a finite set Q of forbidden words.
///
/// `create` normalizes user input: duplicates are removed and any word that
/// contains another forbidden word is dropped, since it forbids nothing new.
/// Specs produced by `repair_complete_invariance` and `cut_cylinder` keep
/// the words they append verbatim so that the maximal forbidden length is
/// preserved.
class SubshiftSpec {
 public:
  static SubshiftSpec create(int alphabet_size, std::vector<Word> forbidden);

  int alphabet_size() const noexcept { return p_; }
  const std::vector<Word>& forbidden() const noexcept { return q_; }
  /// l(Q): the longest forbidden word, 0 when Q is empty.
  std::size_t max_forbidden_length() const noexcept { return lq_; }

  /// True when no forbidden word occurs anywhere in `word`.
  bool avoids(std::span<const int> word) const;
  /// True when no forbidden word is a suffix of `word`.
  bool suffix_avoids(std::span<const int> word) const;

  friend bool operator==(const SubshiftSpec&, const SubshiftSpec&) = default;

  /// Builds a spec without normalization. Words are validated and sorted.
  static SubshiftSpec raw(int alphabet_size, std::vector<Word> forbidden);

 private:
  SubshiftSpec() = default;
  int p_ = 1;
  std::vector<Word> q_;
  std::size_t lq_ = 0;
};

/// De Bruijn style presentation of Sigma_Q. Nodes are the allowed words of
/// length l(Q)-1 (a single empty sentinel when l(Q) <= 1); an edge u -> v
/// labelled s exists when u.s avoids Q and v is the length-(l(Q)-1) suffix
/// of u.s. The graph is pruned so that every node has an out-edge.
struct FollowerGraph {
  struct Edge {
    std::size_t target;
    int symbol;
  };

  SubshiftSpec spec = SubshiftSpec::create(1, {});
  std::size_t node_length = 0;
  std::vector<Word> nodes;               // lexicographic
  std::vector<std::vector<Edge>> out;    // edges sorted by symbol

  std::size_t size() const noexcept { return nodes.size(); }
  std::size_t edge_count() const;
  std::vector<std::size_t> in_degrees() const;
};

/// Throws EmptySubshift when pruning removes every node.
FollowerGraph build_follower_graph(const SubshiftSpec& spec);

/// Appends to Q every node word without an admissible left extension,
/// repeating until sigma(Sigma_Q') = Sigma_Q'. Throws EmptySubshift.
SubshiftSpec repair_complete_invariance(const SubshiftSpec& spec);

/// Strongly connected components carrying at least one edge, each returned
/// as a spec restricted to its node set; ordered by smallest node word.
std::vector<SubshiftSpec> transitive_components(const FollowerGraph& graph);

/// Admissible words of length n that extend to an infinite admissible
/// sequence, in lexicographic order. Throws EmptySubshift.
std::vector<Word> enumerate_words(const SubshiftSpec& spec, std::size_t n);
std::vector<Word> enumerate_words(const FollowerGraph& graph, std::size_t n);

/// True iff the periodic stream w w w ... avoids every forbidden word.
bool is_admissible_periodic(const SubshiftSpec& spec, std::span<const int> w);

/// Forbids `w` (|w| >= l(Q)), then repairs complete invariance. Throws
/// EmptySubshift when nothing survives, PreconditionViolation when |w| < l(Q).
SubshiftSpec cut_cylinder(const SubshiftSpec& spec, const Word& w);

}  // namespace thermoset
