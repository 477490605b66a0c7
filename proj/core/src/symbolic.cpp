#include "thermoset/symbolic.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "thermoset/error.hpp"

namespace thermoset {

std::string to_string(std::span<const int> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(word[i]);
  }
  return out;
}

bool contains_subword(std::span<const int> hay, std::span<const int> needle) {
  if (needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

namespace {

void validate_words(int p, const std::vector<Word>& words) {
  if (p < 1) throw PreconditionViolation("alphabet size must be >= 1");
  for (const auto& w : words) {
    if (w.empty()) throw PreconditionViolation("forbidden words must be nonempty");
    for (int s : w) {
      if (s < 1 || s > p) {
        throw PreconditionViolation("symbol " + std::to_string(s) + " outside alphabet 1.." +
                                    std::to_string(p));
      }
    }
  }
}

}  // namespace

SubshiftSpec SubshiftSpec::raw(int alphabet_size, std::vector<Word> forbidden) {
  validate_words(alphabet_size, forbidden);
  std::sort(forbidden.begin(), forbidden.end());
  forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
  SubshiftSpec spec;
  spec.p_ = alphabet_size;
  spec.q_ = std::move(forbidden);
  spec.lq_ = 0;
  for (const auto& w : spec.q_) spec.lq_ = std::max(spec.lq_, w.size());
  return spec;
}

SubshiftSpec SubshiftSpec::create(int alphabet_size, std::vector<Word> forbidden) {
  SubshiftSpec deduped = raw(alphabet_size, std::move(forbidden));
  std::vector<Word> kept;
  const auto& q = deduped.q_;
  for (std::size_t i = 0; i < q.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < q.size() && !redundant; ++j) {
      if (i != j && contains_subword(q[i], q[j])) redundant = true;
    }
    if (!redundant) kept.push_back(q[i]);
  }
  return raw(alphabet_size, std::move(kept));
}

bool SubshiftSpec::avoids(std::span<const int> word) const {
  for (const auto& q : q_) {
    if (contains_subword(word, q)) return false;
  }
  return true;
}

bool SubshiftSpec::suffix_avoids(std::span<const int> word) const {
  for (const auto& q : q_) {
    if (q.size() <= word.size() &&
        std::equal(q.begin(), q.end(), word.end() - static_cast<std::ptrdiff_t>(q.size()))) {
      return false;
    }
  }
  return true;
}

std::size_t FollowerGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : out) n += e.size();
  return n;
}

std::vector<std::size_t> FollowerGraph::in_degrees() const {
  std::vector<std::size_t> deg(nodes.size(), 0);
  for (const auto& edges : out) {
    for (const auto& e : edges) ++deg[e.target];
  }
  return deg;
}

namespace {

// All words of length `len` avoiding Q, lexicographic.
std::vector<Word> allowed_words(const SubshiftSpec& spec, std::size_t len) {
  std::vector<Word> result;
  Word cur;
  cur.reserve(len);
  std::function<void()> rec = [&]() {
    if (cur.size() == len) {
      result.push_back(cur);
      return;
    }
    for (int s = 1; s <= spec.alphabet_size(); ++s) {
      cur.push_back(s);
      if (spec.suffix_avoids(cur)) rec();
      cur.pop_back();
    }
  };
  rec();
  return result;
}

// Keeps only nodes flagged in `keep`, reindexing edges; edges into dropped
// nodes vanish.
void restrict_nodes(FollowerGraph& g, const std::vector<bool>& keep) {
  std::vector<std::size_t> remap(g.nodes.size(), std::numeric_limits<std::size_t>::max());
  std::vector<Word> nodes;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (keep[i]) {
      remap[i] = nodes.size();
      nodes.push_back(g.nodes[i]);
    }
  }
  std::vector<std::vector<FollowerGraph::Edge>> out(nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!keep[i]) continue;
    for (const auto& e : g.out[i]) {
      if (keep[e.target]) out[remap[i]].push_back({remap[e.target], e.symbol});
    }
  }
  g.nodes = std::move(nodes);
  g.out = std::move(out);
}

void prune_forward(FollowerGraph& g) {
  for (;;) {
    std::vector<bool> keep(g.nodes.size(), true);
    bool changed = false;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.out[i].empty()) {
        keep[i] = false;
        changed = true;
      }
    }
    if (!changed) return;
    restrict_nodes(g, keep);
  }
}

}  // namespace

FollowerGraph build_follower_graph(const SubshiftSpec& spec) {
  FollowerGraph g;
  g.spec = spec;
  const std::size_t lq = spec.max_forbidden_length();
  g.node_length = lq <= 1 ? 0 : lq - 1;
  g.nodes = allowed_words(spec, g.node_length);
  g.out.assign(g.nodes.size(), {});

  Word buf;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (int s = 1; s <= spec.alphabet_size(); ++s) {
      buf = g.nodes[i];
      buf.push_back(s);
      if (!spec.suffix_avoids(buf)) continue;
      Word next(buf.begin() + 1, buf.end());
      auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), next);
      if (it != g.nodes.end() && *it == next) {
        g.out[i].push_back({static_cast<std::size_t>(it - g.nodes.begin()), s});
      }
    }
  }
  prune_forward(g);
  if (g.nodes.empty()) {
    throw EmptySubshift("no infinite sequence avoids the forbidden words");
  }
  return g;
}

SubshiftSpec repair_complete_invariance(const SubshiftSpec& spec) {
  SubshiftSpec current = spec;
  for (;;) {
    FollowerGraph g = build_follower_graph(current);
    if (g.node_length == 0) return current;
    const auto deg = g.in_degrees();
    std::vector<Word> added;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (deg[i] == 0) added.push_back(g.nodes[i]);
    }
    if (added.empty()) return current;
    std::vector<Word> q = current.forbidden();
    q.insert(q.end(), added.begin(), added.end());
    current = SubshiftSpec::raw(current.alphabet_size(), std::move(q));
  }
}

namespace {

// Tarjan's algorithm; returns component id per node in discovery order.
std::vector<std::vector<std::size_t>> strongly_connected(const FollowerGraph& g) {
  const std::size_t n = g.nodes.size();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& e : g.out[v]) {
      if (index[e.target] == kUnset) {
        visit(e.target);
        low[v] = std::min(low[v], low[e.target]);
      } else if (on_stack[e.target]) {
        low[v] = std::min(low[v], index[e.target]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == kUnset) visit(v);
  }
  return comps;
}

}  // namespace

std::vector<SubshiftSpec> transitive_components(const FollowerGraph& graph) {
  std::vector<SubshiftSpec> result;
  if (graph.nodes.empty()) return result;
  auto comps = strongly_connected(graph);
  // Node indices follow lexicographic order, so sorting by first index
  // sorts by smallest node word.
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  const auto& spec = graph.spec;
  const auto all_nodes = allowed_words(spec, graph.node_length);
  for (const auto& comp : comps) {
    bool has_edge = comp.size() > 1;
    if (!has_edge) {
      for (const auto& e : graph.out[comp.front()]) {
        if (e.target == comp.front()) has_edge = true;
      }
    }
    if (!has_edge) continue;
    if (graph.node_length == 0) {
      result.push_back(spec);
      continue;
    }
    std::vector<Word> members;
    for (std::size_t i : comp) members.push_back(graph.nodes[i]);
    std::vector<Word> q = spec.forbidden();
    for (const auto& w : all_nodes) {
      if (!std::binary_search(members.begin(), members.end(), w)) q.push_back(w);
    }
    result.push_back(SubshiftSpec::raw(spec.alphabet_size(), std::move(q)));
  }
  return result;
}

std::vector<Word> enumerate_words(const FollowerGraph& g, std::size_t n) {
  if (n == 0) throw PreconditionViolation("word length must be >= 1");
  std::vector<Word> result;
  if (n <= g.node_length) {
    for (const auto& node : g.nodes) result.emplace_back(node.begin(), node.begin() + n);
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
  }
  const std::size_t steps = n - g.node_length;
  Word cur;
  cur.reserve(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t node, std::size_t left) {
    if (left == 0) {
      result.push_back(cur);
      return;
    }
    for (const auto& e : g.out[node]) {
      cur.push_back(e.symbol);
      rec(e.target, left - 1);
      cur.pop_back();
    }
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    cur = g.nodes[i];
    rec(i, steps);
  }
  return result;
}

std::vector<Word> enumerate_words(const SubshiftSpec& spec, std::size_t n) {
  return enumerate_words(build_follower_graph(spec), n);
}

bool is_admissible_periodic(const SubshiftSpec& spec, std::span<const int> w) {
  if (w.empty()) throw PreconditionViolation("periodic word must be nonempty");
  const std::size_t need = w.size() + spec.max_forbidden_length();
  Word stream;
  stream.reserve(need + w.size());
  while (stream.size() < need) stream.insert(stream.end(), w.begin(), w.end());
  return spec.avoids(stream);
}

SubshiftSpec cut_cylinder(const SubshiftSpec& spec, const Word& w) {
  if (w.size() < spec.max_forbidden_length()) {
    throw PreconditionViolation("cut word " + to_string(w) + " shorter than l(Q)");
  }
  if (!spec.avoids(w)) return repair_complete_invariance(spec);
  std::vector<Word> q = spec.forbidden();
  q.push_back(w);
  return repair_complete_invariance(SubshiftSpec::raw(spec.alphabet_size(), std::move(q)));
}

}  // namespace thermoset
