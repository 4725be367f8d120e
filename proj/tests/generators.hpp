#ifndef GRIDBANK_TESTS_GENERATORS_HPP
#define GRIDBANK_TESTS_GENERATORS_HPP

// Seeded random-structure generators shared by the unit and acceptance
// suites. Every generated forest satisfies the documented constituency
// invariants (disjoint child yields, sibling-function uniqueness); root
// yields stay contiguous except for the optional uncovered-gap case.

#include <random>
#include <string>
#include <vector>

#include "gridbank/treegrid.hpp"

namespace gridbank::testgen {

struct ForestOptions {
  std::size_t max_tokens = 20;
  std::size_t max_level = 5;  // tree levels below the root
  std::size_t max_fanout = 4;
  bool allow_discontinuous = true;
};

inline const std::vector<std::string>& function_pool() {
  static const std::vector<std::string> pool = {
      "subj", "pred", "obj", "adv", "attr", "det", "mod", "comp", "gen"};
  return pool;
}

inline const std::vector<std::string>& form_pool() {
  static const std::vector<std::string> pool = {"np", "vp", "pp", "ap",
                                                "advp", "cl", "nom"};
  return pool;
}

// Recursively splits `tokens` (sorted, possibly non-contiguous) into
// terminals and labelled child groups.
inline void grow_node(gridbank::ConstituencyNode& node,
                      std::vector<std::size_t> tokens, std::size_t level,
                      const ForestOptions& options, std::mt19937& rng) {
  node.yield_tokens = tokens;
  std::uniform_int_distribution<int> coin(0, 1);
  if (level >= options.max_level || tokens.size() < 2 || coin(rng) == 0) {
    for (std::size_t t : tokens) node.children.push_back(TreeChild{t});
    return;
  }
  // Deal tokens into up to max_fanout groups; group 0 holds terminals.
  std::uniform_int_distribution<std::size_t> group_count(
      1, std::min(options.max_fanout, tokens.size()));
  const std::size_t groups = group_count(rng);
  std::vector<std::vector<std::size_t>> buckets(groups + 1);
  std::uniform_int_distribution<std::size_t> pick(0, groups);
  for (std::size_t t : tokens) {
    std::size_t g = pick(rng);
    if (!options.allow_discontinuous && g != 0) {
      // Contiguous mode: tokens go to the bucket of their predecessor
      // unless a new group starts here.
      g = buckets[g].empty() || buckets[g].back() + 1 == t ? g : 0;
    }
    buckets[g].push_back(t);
  }
  std::vector<std::string> functions = function_pool();
  std::shuffle(functions.begin(), functions.end(), rng);
  std::uniform_int_distribution<std::size_t> form_pick(
      0, form_pool().size() - 1);
  std::size_t used = 0;
  for (std::size_t g = 1; g <= groups; ++g) {
    if (buckets[g].empty()) continue;
    ConstituencyNode child;
    child.function_label = functions[used++];
    child.form_label = form_pool()[form_pick(rng)];
    grow_node(child, buckets[g], level + 1, options, rng);
    node.children.push_back(TreeChild{std::move(child)});
  }
  for (std::size_t t : buckets[0]) node.children.push_back(TreeChild{t});
  if (node.children.empty()) {
    for (std::size_t t : tokens) node.children.push_back(TreeChild{t});
  }
  std::sort(node.children.begin(), node.children.end(),
            [](const TreeChild& a, const TreeChild& b) {
              const auto left = [](const TreeChild& c) {
                if (const auto* t = std::get_if<std::size_t>(&c)) return *t;
                return std::get<ConstituencyNode>(c).yield_tokens.front();
              };
              return left(a) < left(b);
            });
}

// Random forest over a fresh token range. Returns the forest and sets
// `token_count`; some tokens may stay outside every tree.
inline gridbank::Forest random_forest(std::mt19937& rng,
                                      std::size_t& token_count,
                                      const ForestOptions& options = {}) {
  std::uniform_int_distribution<std::size_t> n_tokens(1, options.max_tokens);
  token_count = n_tokens(rng);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  Forest forest;
  std::size_t pos = 0;
  while (pos < token_count) {
    if (coin(rng) == 0 && pos + 1 < token_count) {
      ++pos; // leave a token uncovered
      continue;
    }
    std::uniform_int_distribution<std::size_t> span_len(
        1, std::min<std::size_t>(8, token_count - pos));
    const std::size_t len = span_len(rng);
    ConstituencyNode root;
    const char* kinds[] = {"s", "kg", "ni"};
    root.form_label = kinds[kind(rng)];
    root.function_label = root.form_label;
    std::vector<std::size_t> tokens;
    for (std::size_t t = pos; t < pos + len; ++t) tokens.push_back(t);
    grow_node(root, std::move(tokens), 0, options, rng);
    forest.push_back(std::move(root));
    pos += len;
  }
  return forest;
}

// Random single-rooted dependency sentence with unique relations among
// co-dependents.
inline gridbank::DependencyGraph random_dependency(std::mt19937& rng,
                                                   std::size_t max_tokens =
                                                       15) {
  std::uniform_int_distribution<std::size_t> n_tokens(1, max_tokens);
  const std::size_t n = n_tokens(rng);
  DependencyGraph graph;
  graph.tokens.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> siblings(n, 0);
  const char* pos_pool[] = {"NN", "VV", "ADJ", "ADV"};
  std::uniform_int_distribution<int> pos_pick(0, 3);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const std::size_t token = order[rank];
    DepToken& t = graph.tokens[token];
    t.form = "w" + std::to_string(token);
    t.norm = t.form;
    t.pos = pos_pool[pos_pick(rng)];
    if (rank == 0) {
      t.head = std::nullopt;
      t.relation = "root";
      continue;
    }
    std::uniform_int_distribution<std::size_t> head_pick(0, rank - 1);
    const std::size_t head = order[head_pick(rng)];
    t.head = head;
    t.relation = function_pool()[siblings[head] % function_pool().size()];
    if (siblings[head] >= function_pool().size()) {
      t.relation += "_" + std::to_string(siblings[head]);
    }
    ++siblings[head];
  }
  return graph;
}

} // namespace gridbank::testgen

#endif
