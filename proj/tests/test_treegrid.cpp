#include "gridbank/treegrid.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "gridbank/io.hpp"

using namespace gridbank;

namespace {

ConstituencyNode terminal_node(const std::string& function,
                               const std::string& form,
                               std::vector<std::size_t> tokens) {
  ConstituencyNode node;
  node.function_label = function;
  node.form_label = form;
  node.yield_tokens = tokens;
  for (std::size_t t : tokens) node.children.push_back(TreeChild{t});
  return node;
}

GridCell form_cell(std::size_t start, std::size_t end, std::size_t depth,
                   const std::string& label, bool disc = false) {
  return {{start, end}, depth, label, CellKind::Form, disc};
}

GridCell fn_cell(std::size_t start, std::size_t end, std::size_t depth,
                 const std::string& label, bool disc = false) {
  return {{start, end}, depth, label, CellKind::Function, disc};
}

const HeadRules& rules() {
  static const HeadRules r =
      load_head_rules(std::string(GRIDBANK_DATA_DIR) + "/head_rules.txt");
  return r;
}

} // namespace

TEST_CASE("single cell grid becomes a one-terminal tree") {
  GridDocument grid;
  grid.token_count = 1;
  grid.cells = {form_cell(0, 1, 0, "s")};
  const Forest forest = grid_to_tree(grid);
  REQUIRE(forest.size() == 1);
  CHECK(forest[0].form_label == "s");
  CHECK(forest[0].yield_tokens == std::vector<std::size_t>{0});
  REQUIRE(forest[0].children.size() == 1);
  CHECK(std::get<std::size_t>(forest[0].children[0]) == 0);
}

TEST_CASE("two-child grid round trips") {
  GridDocument grid;
  grid.token_count = 3;
  grid.cells = {form_cell(0, 3, 0, "s"),  fn_cell(0, 1, 1, "subj"),
                fn_cell(1, 3, 1, "pred"), form_cell(0, 1, 2, "np"),
                form_cell(1, 3, 2, "vp")};
  std::sort(grid.cells.begin(), grid.cells.end(),
            [](const GridCell& a, const GridCell& b) {
              if (a.depth != b.depth) return a.depth < b.depth;
              return a.rows.start < b.rows.start;
            });
  const Forest forest = grid_to_tree(grid);
  REQUIRE(forest.size() == 1);
  REQUIRE(forest[0].children.size() == 2);
  const auto& subj = std::get<ConstituencyNode>(forest[0].children[0]);
  const auto& pred = std::get<ConstituencyNode>(forest[0].children[1]);
  CHECK(subj.function_label == "subj");
  CHECK(subj.form_label == "np");
  CHECK(pred.function_label == "pred");
  CHECK(pred.yield_tokens == std::vector<std::size_t>{1, 2});
  CHECK(tree_to_grid(forest, 3) == grid);
}

TEST_CASE("discontinuous parts merge into one node") {
  GridDocument grid;
  grid.token_count = 5;
  grid.cells = {form_cell(0, 5, 0, "s"),
                fn_cell(1, 2, 1, "pred", true),
                fn_cell(4, 5, 1, "pred", true),
                form_cell(1, 2, 2, "vp", true),
                form_cell(4, 5, 2, "vp", true)};
  const Forest forest = grid_to_tree(grid);
  REQUIRE(forest.size() == 1);
  REQUIRE(forest[0].children.size() == 4); // pred node + terminals 0, 2, 3
  std::size_t node_children = 0;
  for (const TreeChild& child : forest[0].children) {
    if (const auto* sub = std::get_if<ConstituencyNode>(&child)) {
      ++node_children;
      CHECK(sub->function_label == "pred");
      CHECK(sub->yield_tokens == std::vector<std::size_t>{1, 4});
    }
  }
  CHECK(node_children == 1);

  const GridDocument back = tree_to_grid(forest, 5);
  CHECK(back == grid);
}

TEST_CASE("grid violations are named") {
  SUBCASE("kind does not match depth parity") {
    GridDocument grid;
    grid.token_count = 1;
    grid.cells = {{{0, 1}, 0, "s", CellKind::Function, false}};
    CHECK_THROWS_AS(grid_to_tree(grid), StructureError);
    CHECK_FALSE(validate_grid(grid).ok());
  }
  SUBCASE("same-depth overlap") {
    GridDocument grid;
    grid.token_count = 3;
    grid.cells = {form_cell(0, 2, 0, "s"), form_cell(1, 3, 0, "s")};
    CHECK_THROWS_AS(grid_to_tree(grid), StructureError);
  }
  SUBCASE("function cell without realization") {
    GridDocument grid;
    grid.token_count = 2;
    grid.cells = {form_cell(0, 2, 0, "s"), fn_cell(0, 1, 1, "subj")};
    CHECK_THROWS_AS(grid_to_tree(grid), StructureError);
  }
  SUBCASE("coverage hole below a deep cell") {
    GridDocument grid;
    grid.token_count = 2;
    grid.cells = {fn_cell(0, 1, 1, "subj"), form_cell(0, 1, 2, "np")};
    CHECK_THROWS_AS(grid_to_tree(grid), StructureError);
  }
  SUBCASE("stray discontinuity flag") {
    GridDocument grid;
    grid.token_count = 2;
    grid.cells = {form_cell(0, 2, 0, "s", true)};
    CHECK_THROWS_AS(grid_to_tree(grid), StructureError);
  }
  SUBCASE("duplicate sibling function labels") {
    ConstituencyNode root = terminal_node("s", "s", {});
    root.yield_tokens = {0, 1};
    root.children.push_back(
        TreeChild{terminal_node("subj", "np", {0})});
    root.children.push_back(
        TreeChild{terminal_node("subj", "np", {1})});
    CHECK_THROWS_AS(tree_to_grid({root}, 2), DuplicateFunction);
  }
}

TEST_CASE("random forests survive both grid round trips") {
  std::mt19937 rng(511);
  for (int round = 0; round < 150; ++round) {
    std::size_t token_count = 0;
    const Forest forest = testgen::random_forest(rng, token_count);
    const GridDocument grid = tree_to_grid(forest, token_count);
    CAPTURE(round);
    REQUIRE(validate_grid(grid).ok());
    const Forest back = grid_to_tree(grid);
    REQUIRE(back == forest);
    CHECK(tree_to_grid(back, token_count) == grid);
  }
}

TEST_CASE("tree to dependency follows the head rules") {
  SUBCASE("single terminal is the root") {
    const Forest forest = {terminal_node("s", "s", {0})};
    const auto sentences = tree_to_dependency(forest, rules());
    REQUIRE(sentences.size() == 1);
    REQUIRE(sentences[0].tokens.size() == 1);
    CHECK_FALSE(sentences[0].tokens[0].head.has_value());
    CHECK(sentences[0].tokens[0].relation == "s");
  }

  SUBCASE("predicate child carries the sentence head") {
    ConstituencyNode root;
    root.function_label = "s";
    root.form_label = "s";
    root.yield_tokens = {0, 1, 2};
    root.children.push_back(TreeChild{terminal_node("subj", "np", {0})});
    root.children.push_back(TreeChild{terminal_node("pred", "vp", {1, 2})});
    const auto sentences = tree_to_dependency({root}, rules());
    REQUIRE(sentences.size() == 1);
    const DependencyGraph& g = sentences[0];
    REQUIRE(g.tokens.size() == 3);
    CHECK(g.tokens[0].head == 1);
    CHECK(g.tokens[0].relation == "subj");
    CHECK_FALSE(g.tokens[1].head.has_value()); // verb is the root
    CHECK(g.tokens[2].head == 1);
    CHECK(g.tokens[2].relation == "tok");
  }

  SUBCASE("interleaved discontinuous siblings give a crossing arc") {
    ConstituencyNode root;
    root.function_label = "s";
    root.form_label = "s";
    root.yield_tokens = {0, 1, 2, 3, 4};
    root.children.push_back(TreeChild{std::size_t{0}});
    root.children.push_back(TreeChild{terminal_node("pred", "vp", {1, 3})});
    root.children.push_back(TreeChild{terminal_node("subj", "np", {2, 4})});
    const auto sentences = tree_to_dependency({root}, rules());
    REQUIRE(sentences.size() == 1);
    const DependencyGraph& g = sentences[0];
    // Arcs as (min,max) intervals; two arcs cross iff exactly one
    // endpoint of the second lies strictly inside the first.
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t i = 0; i < g.tokens.size(); ++i) {
      if (g.tokens[i].head) {
        arcs.push_back({std::min(i, *g.tokens[i].head),
                        std::max(i, *g.tokens[i].head)});
      }
    }
    bool crossing = false;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      for (std::size_t b = 0; b < arcs.size(); ++b) {
        const bool a_in = arcs[b].first < arcs[a].first &&
                          arcs[a].first < arcs[b].second;
        const bool b_out = arcs[a].second > arcs[b].second;
        if (a_in && b_out) crossing = true;
      }
    }
    CHECK(crossing);
  }

  SUBCASE("a childless node has no head") {
    ConstituencyNode root;
    root.function_label = "s";
    root.form_label = "s";
    root.yield_tokens = {0};
    CHECK_THROWS_AS(tree_to_dependency({root}, rules()), NoHeadFound);
  }
}

TEST_CASE("dependency to tree") {
  SUBCASE("single root token") {
    DependencyGraph g;
    g.tokens.push_back({"w0", "w0", "NN", std::nullopt, "root"});
    const TreeConversion conv = dependency_to_tree(g);
    CHECK(conv.tree.yield_tokens == std::vector<std::size_t>{0});
    CHECK(conv.tree.head_token == 0);
    CHECK(conv.warnings.empty());
  }

  SUBCASE("chains become nested trees") {
    DependencyGraph g;
    g.tokens.push_back({"a", "a", "X", 1, "r1"});
    g.tokens.push_back({"b", "b", "X", 2, "r2"});
    g.tokens.push_back({"c", "c", "X", std::nullopt, "root"});
    const TreeConversion conv = dependency_to_tree(g);
    const ConstituencyNode& c = conv.tree;
    REQUIRE(c.children.size() == 2); // terminal 2 + subtree b
    const auto& b = std::get<ConstituencyNode>(c.children[0]);
    CHECK(b.function_label == "r2");
    const auto& a = std::get<ConstituencyNode>(b.children[0]);
    CHECK(a.function_label == "r1");
    CHECK(a.yield_tokens == std::vector<std::size_t>{0});
  }

  SUBCASE("relation collisions are disambiguated with a warning") {
    DependencyGraph g;
    g.tokens.push_back({"a", "a", "X", 2, "obj"});
    g.tokens.push_back({"b", "b", "X", 2, "obj"});
    g.tokens.push_back({"c", "c", "X", std::nullopt, "root"});
    const TreeConversion conv = dependency_to_tree(g);
    REQUIRE(conv.warnings.size() == 1);
    std::vector<std::string> functions;
    for (const TreeChild& child : conv.tree.children) {
      if (const auto* sub = std::get_if<ConstituencyNode>(&child)) {
        functions.push_back(sub->function_label);
      }
    }
    CHECK(functions == std::vector<std::string>{"obj", "obj#2"});
  }

  SUBCASE("cycles and multiple roots are rejected") {
    DependencyGraph cycle;
    cycle.tokens.push_back({"a", "a", "X", 1, "r"});
    cycle.tokens.push_back({"b", "b", "X", 0, "r"});
    CHECK_THROWS_AS(dependency_to_tree(cycle), CycleDetected);

    DependencyGraph two_roots;
    two_roots.tokens.push_back({"a", "a", "X", std::nullopt, "root"});
    two_roots.tokens.push_back({"b", "b", "X", std::nullopt, "root"});
    CHECK_THROWS_AS(dependency_to_tree(two_roots), MultipleRoots);
  }
}

TEST_CASE("dependency round trip preserves heads, relations, roots") {
  std::mt19937 rng(907);
  for (int round = 0; round < 150; ++round) {
    const DependencyGraph graph = testgen::random_dependency(rng);
    const TreeConversion conv = dependency_to_tree(graph);
    REQUIRE(conv.warnings.empty());
    const auto back = tree_to_dependency({conv.tree}, rules());
    REQUIRE(back.size() == 1);
    REQUIRE(back[0].tokens.size() == graph.tokens.size());
    for (std::size_t i = 0; i < graph.tokens.size(); ++i) {
      CAPTURE(round);
      CAPTURE(i);
      CHECK(back[0].tokens[i].head == graph.tokens[i].head);
      CHECK(back[0].tokens[i].relation == graph.tokens[i].relation);
    }
  }
}

TEST_CASE("standoff export matches the reference fixture") {
  LayeredText doc;
  doc.meta.id = "ref";
  doc.tokens.items = {"Der", "Mann", "geht"};
  doc.norm.items = {"", "", "gehet"};
  doc.source_tokens = {{{0, 1}, "Der"}, {{1, 2}, "Mann"}, {{2, 3}, "geht"}};
  doc.macro_units = {{{0, 3}, MacroKind::Sentence}};
  doc.orth_sentences = {{0, 3}};

  ConstituencyNode root;
  root.function_label = "s";
  root.form_label = "s";
  root.yield_tokens = {0, 1, 2};
  ConstituencyNode np = terminal_node("subj", "np", {0, 1});
  root.children.push_back(TreeChild{np});
  root.children.push_back(TreeChild{terminal_node("pred", "vp", {2})});
  const Forest forest = {root};

  const StandoffFiles files = export_standoff(doc, forest);
  const std::string dir = std::string(GRIDBANK_FIXTURE_DIR) + "/standoff";
  CHECK(files.text_xml == read_file(dir + "/ref.text.xml"));
  CHECK(files.mark_xml == read_file(dir + "/ref.mark.xml"));
  CHECK(files.struct_xml == read_file(dir + "/ref.struct.xml"));

  const StandoffDoc round = read_standoff(files.text_xml, files.mark_xml,
                                          files.struct_xml);
  CHECK(round.forest == forest);
  CHECK(round.doc == doc);
}

TEST_CASE("standoff export of an empty document") {
  const StandoffFiles files = export_standoff(LayeredText{}, {});
  CHECK(files.text_xml.find("<tokens") != std::string::npos);
  CHECK(files.struct_xml.find("<structure") != std::string::npos);
  const StandoffDoc round = read_standoff(files.text_xml, files.mark_xml,
                                          files.struct_xml);
  CHECK(round.doc.size() == 0);
  CHECK(round.forest.empty());
}

TEST_CASE("standoff reimport reconstructs random forests") {
  std::mt19937 rng(313);
  for (int round = 0; round < 50; ++round) {
    std::size_t token_count = 0;
    const Forest forest = testgen::random_forest(rng, token_count);
    LayeredText doc;
    for (std::size_t i = 0; i < token_count; ++i) {
      doc.tokens.items.push_back("w" + std::to_string(i));
    }
    const StandoffFiles files = export_standoff(doc, forest);
    const StandoffDoc back = read_standoff(files.text_xml, files.mark_xml,
                                           files.struct_xml);
    CAPTURE(round);
    REQUIRE(back.forest == forest);
  }
}

TEST_CASE("discontinuous structures export one node with two token runs") {
  LayeredText doc;
  doc.tokens.items = {"a", "b", "c", "d", "e"};
  ConstituencyNode root;
  root.function_label = "s";
  root.form_label = "s";
  root.yield_tokens = {0, 1, 2, 3, 4};
  root.children.push_back(TreeChild{std::size_t{0}});
  root.children.push_back(TreeChild{terminal_node("pred", "vp", {1, 4})});
  root.children.push_back(TreeChild{terminal_node("subj", "np", {2, 3})});
  const StandoffFiles files = export_standoff(doc, {root});
  CHECK(files.struct_xml.find("tokens=\"1 4\"") != std::string::npos);
}
