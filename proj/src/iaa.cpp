#include "gridbank/iaa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

LabeledTree to_labeled_tree(const ConstituencyNode& node) {
  LabeledTree tree;
  tree.label = node.function_label + "=" + node.form_label;
  for (const TreeChild& child : node.children) {
    if (const auto* t = std::get_if<std::size_t>(&child)) {
      tree.children.push_back({"t" + std::to_string(*t), {}});
    } else {
      tree.children.push_back(to_labeled_tree(std::get<ConstituencyNode>(child)));
    }
  }
  return tree;
}

std::size_t tree_size(const LabeledTree& tree) {
  std::size_t n = 1;
  for (const auto& child : tree.children) n += tree_size(child);
  return n;
}

namespace {

constexpr double kCostEps = 1e-9;

// Postorder flattening with 1-based indices; index 0 is a dummy.
struct FlatTree {
  std::vector<const std::string*> labels; // [1..n]
  std::vector<std::size_t> lml;           // leftmost leaf descendant
  std::vector<std::size_t> keyroots;      // ascending
  std::size_t n = 0;
};

std::size_t flatten_into(const LabeledTree& node, FlatTree& flat) {
  std::size_t leftmost_leaf = 0;
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    const std::size_t child_lml = flatten_into(node.children[c], flat);
    if (c == 0) leftmost_leaf = child_lml;
  }
  flat.labels.push_back(&node.label);
  flat.lml.push_back(node.children.empty() ? flat.labels.size() - 1
                                           : leftmost_leaf);
  return flat.lml.back();
}

FlatTree flatten(const LabeledTree& root) {
  FlatTree flat;
  flat.labels.push_back(nullptr); // dummy index 0
  flat.lml.push_back(0);
  flatten_into(root, flat);
  flat.n = flat.labels.size() - 1;
  // Keyroots: nodes with no later node sharing their leftmost leaf.
  std::vector<char> seen(flat.n + 1, 0);
  for (std::size_t i = flat.n; i >= 1; --i) {
    if (!seen[flat.lml[i]]) {
      seen[flat.lml[i]] = 1;
      flat.keyroots.push_back(i);
    }
  }
  std::sort(flat.keyroots.begin(), flat.keyroots.end());
  return flat;
}

struct TedSolver {
  const FlatTree& a;
  const FlatTree& b;
  const TedCosts& costs;
  std::vector<std::vector<double>> treedist;

  double update(const std::string& from, const std::string& to) const {
    if (from == to) return 0.0;
    if (costs.mode == UpdateCostMode::Unit) return costs.update_cost;
    const std::u32string u = decode_utf8(from);
    const std::u32string v = decode_utf8(to);
    const std::size_t longest = std::max(u.size(), v.size());
    if (longest == 0) return 0.0;
    return costs.update_cost *
           static_cast<double>(damerau_levenshtein(u, v)) /
           static_cast<double>(longest);
  }

  // Forest distance for the subforests anchored at keyroots (x, y).
  // fd is indexed with offsets so that row 0 / column 0 mean "empty".
  struct ForestDist {
    std::size_t lx, ly; // leftmost leaves of x and y
    std::vector<std::vector<double>> d;
    double& at(std::size_t i, std::size_t j) {
      return d[i == 0 ? 0 : i - lx + 1][j == 0 ? 0 : j - ly + 1];
    }
  };

  ForestDist forest_distance(std::size_t x, std::size_t y,
                             bool record_treedist) {
    ForestDist fd;
    fd.lx = a.lml[x];
    fd.ly = b.lml[y];
    const std::size_t rows = x - fd.lx + 2;
    const std::size_t cols = y - fd.ly + 2;
    fd.d.assign(rows, std::vector<double>(cols, 0.0));
    for (std::size_t i = fd.lx; i <= x; ++i) {
      fd.at(i, 0) = fd.at(i == fd.lx ? 0 : i - 1, 0) + costs.delete_cost;
    }
    for (std::size_t j = fd.ly; j <= y; ++j) {
      fd.at(0, j) = fd.at(0, j == fd.ly ? 0 : j - 1) + costs.insert_cost;
    }
    for (std::size_t i = fd.lx; i <= x; ++i) {
      for (std::size_t j = fd.ly; j <= y; ++j) {
        const std::size_t pi = i == fd.lx ? 0 : i - 1;
        const std::size_t pj = j == fd.ly ? 0 : j - 1;
        if (a.lml[i] == fd.lx && b.lml[j] == fd.ly) {
          const double cost =
              std::min({fd.at(pi, j) + costs.delete_cost,
                        fd.at(i, pj) + costs.insert_cost,
                        fd.at(pi, pj) + update(*a.labels[i], *b.labels[j])});
          fd.at(i, j) = cost;
          if (record_treedist) treedist[i][j] = cost;
        } else {
          const std::size_t qi = a.lml[i] == fd.lx ? 0 : a.lml[i] - 1;
          const std::size_t qj = b.lml[j] == fd.ly ? 0 : b.lml[j] - 1;
          fd.at(i, j) = std::min({fd.at(pi, j) + costs.delete_cost,
                                  fd.at(i, pj) + costs.insert_cost,
                                  fd.at(qi, qj) + treedist[i][j]});
        }
      }
    }
    return fd;
  }

  void solve() {
    treedist.assign(a.n + 1, std::vector<double>(b.n + 1, 0.0));
    for (std::size_t x : a.keyroots) {
      for (std::size_t y : b.keyroots) {
        forest_distance(x, y, /*record_treedist=*/true);
      }
    }
  }

  // Emits one optimal script for the subtree pair (x, y) by retracing a
  // recomputed forest-distance matrix.
  void backtrack(std::size_t x, std::size_t y, std::vector<EditOp>& ops) {
    ForestDist fd = forest_distance(x, y, /*record_treedist=*/false);
    std::size_t i = x; // 0 = empty left forest
    std::size_t j = y;
    while (i != 0 || j != 0) {
      if (i == 0) { // only inserts remain
        ops.push_back({EditOp::Kind::Insert, *b.labels[j], "",
                       costs.insert_cost});
        j = j == fd.ly ? 0 : j - 1;
        continue;
      }
      if (j == 0) { // only removals remain
        ops.push_back({EditOp::Kind::Remove, *a.labels[i], "",
                       costs.delete_cost});
        i = i == fd.lx ? 0 : i - 1;
        continue;
      }
      const std::size_t pi = i == fd.lx ? 0 : i - 1;
      const std::size_t pj = j == fd.ly ? 0 : j - 1;
      const double here = fd.at(i, j);
      if (std::abs(here - (fd.at(pi, j) + costs.delete_cost)) < kCostEps) {
        ops.push_back({EditOp::Kind::Remove, *a.labels[i], "",
                       costs.delete_cost});
        i = pi;
        continue;
      }
      if (std::abs(here - (fd.at(i, pj) + costs.insert_cost)) < kCostEps) {
        ops.push_back({EditOp::Kind::Insert, *b.labels[j], "",
                       costs.insert_cost});
        j = pj;
        continue;
      }
      if (a.lml[i] == fd.lx && b.lml[j] == fd.ly) {
        const double upd = update(*a.labels[i], *b.labels[j]);
        if (*a.labels[i] != *b.labels[j]) {
          ops.push_back({EditOp::Kind::Update, *a.labels[i], *b.labels[j],
                         upd});
        }
        i = pi;
        j = pj;
        continue;
      }
      // Subtree jump: (i, j) were matched as whole trees.
      backtrack(i, j, ops);
      i = a.lml[i] == fd.lx ? 0 : a.lml[i] - 1;
      j = b.lml[j] == fd.ly ? 0 : b.lml[j] - 1;
    }
  }
};

} // namespace

std::pair<double, EditScript> tree_edit_distance(const LabeledTree& t1,
                                                 const LabeledTree& t2,
                                                 const TedCosts& costs) {
  const FlatTree a = flatten(t1);
  const FlatTree b = flatten(t2);
  TedSolver solver{a, b, costs, {}};
  solver.solve();
  const double distance = solver.treedist[a.n][b.n];
  EditScript script;
  solver.backtrack(a.n, b.n, script.ops);
  for (const EditOp& op : script.ops) script.cost += op.cost;
  return {distance, script};
}

double nominal_alpha(const std::vector<std::vector<std::string>>& items) {
  std::map<std::string, double> totals;              // n_c
  std::map<std::pair<std::string, std::string>, double> coincidence;
  double n = 0;
  for (const auto& item : items) {
    const std::size_t m = item.size();
    if (m < 2) continue; // items with one annotation carry no information
    for (std::size_t i = 0; i < m; ++i) {
      totals[item[i]] += 1;
      n += 1;
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        coincidence[{item[i], item[j]}] +=
            1.0 / static_cast<double>(m - 1);
      }
    }
  }
  if (n < 2 || totals.size() < 2) {
    throw DegenerateData(
        "alpha undefined: need two distinct values over pairable items");
  }
  double observed = 0;
  for (const auto& [pair, weight] : coincidence) {
    if (pair.first != pair.second) observed += weight;
  }
  observed /= n;
  double expected = 0;
  for (const auto& [c, nc] : totals) {
    for (const auto& [k, nk] : totals) {
      if (c != k) expected += nc * nk;
    }
  }
  expected /= n * (n - 1);
  if (expected == 0) {
    throw DegenerateData("alpha undefined: expected disagreement is zero");
  }
  return 1.0 - observed / expected;
}

double distance_alpha(const std::vector<std::vector<LabeledTree>>& items,
                      const TedCosts& costs, bool normalize_by_node_count) {
  struct Annotation {
    const LabeledTree* tree;
    std::size_t item;
    std::size_t nodes;
  };
  std::vector<Annotation> all;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const LabeledTree& tree : items[i]) {
      all.push_back({&tree, i, tree_size(tree)});
    }
  }
  const auto pair_distance = [&](const Annotation& x, const Annotation& y) {
    double d = tree_edit_distance(*x.tree, *y.tree, costs).first;
    if (normalize_by_node_count) {
      d /= (static_cast<double>(x.nodes) + static_cast<double>(y.nodes)) / 2.0;
    }
    return d;
  };
  double observed_sum = 0;
  std::size_t observed_pairs = 0;
  double expected_sum = 0;
  std::size_t expected_pairs = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double d = pair_distance(all[i], all[j]);
      expected_sum += d;
      ++expected_pairs;
      if (all[i].item == all[j].item) {
        observed_sum += d;
        ++observed_pairs;
      }
    }
  }
  if (observed_pairs == 0 || expected_pairs == 0) {
    throw DegenerateData("alpha undefined: no annotation pairs to compare");
  }
  const double expected = expected_sum / static_cast<double>(expected_pairs);
  if (expected == 0) {
    throw DegenerateData("alpha undefined: expected distance is zero");
  }
  const double observed = observed_sum / static_cast<double>(observed_pairs);
  return 1.0 - observed / expected;
}

double cell_alpha(const GridDocument& a, const GridDocument& b) {
  if (a.token_count != b.token_count) {
    throw TokenMismatch("grids cover " + std::to_string(a.token_count) +
                        " vs " + std::to_string(b.token_count) + " tokens");
  }
  std::size_t depths = 0;
  for (const GridCell& cell : a.cells) depths = std::max(depths, cell.depth + 1);
  for (const GridCell& cell : b.cells) depths = std::max(depths, cell.depth + 1);

  const auto matrix = [&](const GridDocument& grid) {
    std::vector<std::vector<std::string>> m(
        grid.token_count, std::vector<std::string>(depths, "∅"));
    for (const GridCell& cell : grid.cells) {
      for (std::size_t t = cell.rows.start; t < cell.rows.end; ++t) {
        m[t][cell.depth] = cell.label;
      }
    }
    return m;
  };
  const auto ma = matrix(a);
  const auto mb = matrix(b);
  std::vector<std::vector<std::string>> items;
  items.reserve(a.token_count * depths);
  for (std::size_t t = 0; t < a.token_count; ++t) {
    for (std::size_t d = 0; d < depths; ++d) {
      items.push_back({ma[t][d], mb[t][d]});
    }
  }
  return nominal_alpha(items);
}

EditBreakdown edit_breakdown(std::span<const EditScript> scripts) {
  EditBreakdown breakdown;
  std::size_t inserts = 0, removes = 0, updates = 0;
  for (const EditScript& script : scripts) {
    for (const EditOp& op : script.ops) {
      switch (op.kind) {
        case EditOp::Kind::Insert: ++inserts; break;
        case EditOp::Kind::Remove: ++removes; break;
        case EditOp::Kind::Update:
          ++updates;
          ++breakdown.update_pairs[{op.label, op.to_label}];
          break;
      }
    }
  }
  breakdown.total_ops = inserts + removes + updates;
  if (breakdown.total_ops > 0) {
    const double total = static_cast<double>(breakdown.total_ops);
    breakdown.insert_proportion = inserts / total;
    breakdown.remove_proportion = removes / total;
    breakdown.update_proportion = updates / total;
  }
  return breakdown;
}

} // namespace gridbank
