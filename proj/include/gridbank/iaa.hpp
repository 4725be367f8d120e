#ifndef GRIDBANK_IAA_HPP
#define GRIDBANK_IAA_HPP

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridbank/treegrid.hpp"

namespace gridbank {

// Agreement metrics: tree edit distance with edit scripts, nominal
// Krippendorff alpha, distance-based alpha over trees, and the per-cell
// alpha over two grids.

// Ordered labeled tree as compared by the edit distance. Children keep
// their order (canonically: by leftmost token index).
struct LabeledTree {
  std::string label;
  std::vector<LabeledTree> children;
  bool operator==(const LabeledTree&) const = default;
};

// Converts a constituency node for comparison: inner nodes are labelled
// with their function=form combination, terminals with their token index.
LabeledTree to_labeled_tree(const ConstituencyNode& node);

std::size_t tree_size(const LabeledTree& tree);

enum class UpdateCostMode {
  Unit,            // any label change costs update_cost
  NormalizedString // update_cost * edit_distance(a,b) / max(|a|,|b|)
};

struct TedCosts {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double update_cost = 1.0;
  UpdateCostMode mode = UpdateCostMode::Unit;
};

struct EditOp {
  enum class Kind { Insert, Remove, Update };
  Kind kind = Kind::Update;
  std::string label;    // inserted/removed label, or the old label
  std::string to_label; // new label for updates
  double cost = 0.0;
  bool operator==(const EditOp&) const = default;
};

struct EditScript {
  std::vector<EditOp> ops;
  double cost = 0.0;
};

// Edit distance between two ordered labeled trees together with one
// optimal script realizing exactly that cost. Matches with equal labels
// do not appear in the script.
std::pair<double, EditScript> tree_edit_distance(const LabeledTree& t1,
                                                 const LabeledTree& t2,
                                                 const TedCosts& costs = {});

// Krippendorff's alpha with the nominal distance (0 when equal, 1
// otherwise), computed from the coincidence matrix over all within-item
// value pairs. Items with fewer than two annotations are skipped.
// Throws DegenerateData when every value is identical (alpha undefined).
double nominal_alpha(const std::vector<std::vector<std::string>>& items);

// Alpha over arbitrary annotations with the tree edit distance in place
// of the nominal distance: 1 - D_o/D_e where D_o is the mean distance
// over within-item annotation pairs and D_e the mean over all unordered
// pairs of annotations in the data. `normalize_by_node_count` divides
// every pairwise distance by the mean node count of the pair.
double distance_alpha(const std::vector<std::vector<LabeledTree>>& items,
                      const TedCosts& costs = {},
                      bool normalize_by_node_count = false);

// Nominal alpha over the cell population of two grids covering the same
// tokens: each (token, depth) position is one item, the two grids supply
// its two values, absent cells count as an explicit null category.
double cell_alpha(const GridDocument& a, const GridDocument& b);

struct EditBreakdown {
  std::size_t total_ops = 0;
  double insert_proportion = 0.0;
  double remove_proportion = 0.0;
  double update_proportion = 0.0;
  // (old label, new label) -> occurrence count
  std::map<std::pair<std::string, std::string>, std::size_t> update_pairs;
};

EditBreakdown edit_breakdown(std::span<const EditScript> scripts);

} // namespace gridbank

#endif
