#ifndef GRIDBANK_TREEGRID_HPP
#define GRIDBANK_TREEGRID_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gridbank/core.hpp"

namespace gridbank {

// The spreadsheet-grid treebank model and its structure conversions.
//
// A grid has one row per token and one column per syntactic depth.
// Columns alternate: even depths hold form (constituent) cells, odd
// depths hold function (edge label) cells. A function cell at depth d
// lies inside exactly one form cell at depth d-1 and is realized by a
// form cell of identical row span at depth d+1. Depth-0 cells are the
// macro units; their labels are the macro kinds (s, kg, ni).
//
// Because a syntactic function occurs at most once among the children of
// one form constituent, the function label works as an ID within its
// parent: a discontinuous constituent is stored as several cells with
// the same label, one per maximal contiguous token run, all flagged
// discontinuous (rendered with angle brackets in the TSV form).

enum class CellKind { Form, Function };

struct GridCell {
  Span rows;
  std::size_t depth = 0;
  std::string label;
  CellKind kind = CellKind::Form;
  bool discontinuous = false;
  auto operator<=>(const GridCell&) const = default;
};

struct GridDocument {
  std::size_t token_count = 0;
  std::vector<GridCell> cells;
  bool operator==(const GridDocument&) const = default;
};

// Reports every violated grid invariant; an empty error list means the
// grid converts cleanly.
ValidationReport validate_grid(const GridDocument& grid);

struct ConstituencyNode;
using TreeChild = std::variant<std::size_t, ConstituencyNode>; // terminal | node

struct ConstituencyNode {
  std::string form_label;
  // Edge label to the parent; root nodes carry their macro kind here.
  std::string function_label;
  std::vector<TreeChild> children; // ordered by leftmost token index
  std::vector<std::size_t> yield_tokens; // sorted, possibly non-contiguous
  // Set on trees built from dependency graphs: the lexical head terminal.
  std::optional<std::size_t> head_token;

  bool operator==(const ConstituencyNode&) const;
};

using Forest = std::vector<ConstituencyNode>;

// Grid -> forest, one tree per depth-0 cell group. Throws StructureError
// naming the violated invariant and the offending cell.
Forest grid_to_tree(const GridDocument& grid);

// Forest -> grid; exact inverse of grid_to_tree on its image. A node with
// a non-contiguous yield emits one cell per maximal contiguous run, all
// flagged discontinuous. Throws DuplicateFunction when sibling function
// labels collide (such a tree has no grid representation).
GridDocument tree_to_grid(const Forest& forest, std::size_t token_count);

struct DepToken {
  std::string form = "_";
  std::string norm = "_";
  std::string pos = "_";
  std::optional<std::size_t> head; // 0-based index; nullopt = root
  std::string relation = "root";
  bool operator==(const DepToken&) const = default;
};

// One grammatical sentence; token indices are sentence-local.
struct DependencyGraph {
  std::vector<DepToken> tokens;
  bool operator==(const DependencyGraph&) const = default;
};

// Ordered function labels that mark head children, most preferred first.
// When no rule matches, the leftmost terminal child is the head; a node
// without terminal children falls back to its leftmost child.
struct HeadRules {
  std::vector<std::string> priority;
};

HeadRules load_head_rules(const std::string& path);

// Converts each tree of the forest into one dependency sentence over the
// tree's yield. Non-head children attach their lexical head to the
// parent's lexical head under the child's function label; non-head
// terminal children attach under the reserved relation "tok".
// `token_forms` supplies surface forms by global token index (may be
// empty). Throws NoHeadFound when a node has no head candidate at all.
std::vector<DependencyGraph> tree_to_dependency(
    const Forest& forest, const HeadRules& rules,
    std::span<const std::string> token_forms = {});

struct TreeConversion {
  ConstituencyNode tree;
  std::vector<std::string> warnings; // e.g. disambiguated relation labels
};

// Dependency sentence -> constituency tree: every head token becomes a
// form node holding its head-marked terminal plus one subtree per
// dependent, labelled with the dependency relation. Colliding relation
// labels among co-dependents are disambiguated with an ordinal suffix
// (label#2, ...) and reported in warnings. Token indices in the tree are
// sentence-local plus `token_offset`. Throws CycleDetected and
// MultipleRoots.
TreeConversion dependency_to_tree(const DependencyGraph& dep,
                                  std::size_t token_offset = 0);

struct StandoffFiles {
  std::string text_xml;   // primary token data
  std::string mark_xml;   // markables: norm, source tokens, macro units,
                          // orthographic sentences
  std::string struct_xml; // constituency structure
};

// Deterministic standoff export. Element IDs derive from the path of
// function labels from the root, which the one-function-per-constituent
// rule makes unique.
StandoffFiles export_standoff(const LayeredText& doc, const Forest& forest);

} // namespace gridbank

#endif
