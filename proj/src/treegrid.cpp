#include "gridbank/treegrid.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

bool ConstituencyNode::operator==(const ConstituencyNode& other) const {
  return form_label == other.form_label &&
         function_label == other.function_label &&
         yield_tokens == other.yield_tokens && head_token == other.head_token &&
         children == other.children;
}

namespace {

std::string cell_text(const GridCell& cell) {
  std::ostringstream os;
  os << "cell d" << cell.depth << " [" << cell.rows.start << ","
     << cell.rows.end << ") \"" << cell.label << "\"";
  return os.str();
}

std::vector<Span> maximal_runs(const std::vector<std::size_t>& sorted_tokens) {
  std::vector<Span> runs;
  for (std::size_t t : sorted_tokens) {
    if (!runs.empty() && runs.back().end == t) {
      ++runs.back().end;
    } else {
      runs.push_back({t, t + 1});
    }
  }
  return runs;
}

std::size_t leftmost(const TreeChild& child) {
  if (std::holds_alternative<std::size_t>(child)) {
    return std::get<std::size_t>(child);
  }
  const auto& node = std::get<ConstituencyNode>(child);
  return node.yield_tokens.empty() ? 0 : node.yield_tokens.front();
}

// Shared grid walker: builds the forest and collects invariant
// violations. `strict` throws StructureError at the first problem.
struct GridReader {
  const GridDocument& grid;
  bool strict;
  std::vector<ValidationIssue> errors;
  // cells indexed by depth, sorted by row start
  std::vector<std::vector<const GridCell*>> by_depth;

  GridReader(const GridDocument& g, bool strict_mode)
      : grid(g), strict(strict_mode) {}

  void fail(const std::string& location, const std::string& message) {
    if (strict) throw StructureError(location + ": " + message);
    errors.push_back({location, message});
  }

  bool basic_checks() {
    bool ok = true;
    std::size_t max_depth = 0;
    for (const auto& cell : grid.cells) {
      max_depth = std::max(max_depth, cell.depth);
    }
    by_depth.assign(max_depth + 1, {});
    for (const auto& cell : grid.cells) {
      const CellKind expected =
          cell.depth % 2 == 0 ? CellKind::Form : CellKind::Function;
      if (cell.kind != expected) {
        fail(cell_text(cell), "cell kind does not match depth parity");
        ok = false;
      }
      if (cell.rows.start >= cell.rows.end ||
          cell.rows.end > grid.token_count) {
        fail(cell_text(cell), "row span out of range");
        ok = false;
        continue;
      }
      if (cell.label.empty()) {
        fail(cell_text(cell), "empty label");
        ok = false;
      }
      by_depth[cell.depth].push_back(&cell);
    }
    if (!ok) return false;

    for (auto& cells : by_depth) {
      std::sort(cells.begin(), cells.end(),
                [](const GridCell* a, const GridCell* b) {
                  return a->rows.start < b->rows.start;
                });
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i]->rows.start < cells[i - 1]->rows.end) {
          fail(cell_text(*cells[i]),
               "overlaps " + cell_text(*cells[i - 1]) + " at the same depth");
          ok = false;
        }
      }
    }
    if (!ok) return false;

    // Column fill: the depths covering one token must form a prefix 0..k.
    for (std::size_t t = 0; t < grid.token_count; ++t) {
      std::size_t depth = 0;
      for (; depth < by_depth.size(); ++depth) {
        bool covered = false;
        for (const GridCell* cell : by_depth[depth]) {
          if (cell->rows.contains(t)) {
            covered = true;
            break;
          }
        }
        if (!covered) break;
      }
      for (std::size_t d = depth; d < by_depth.size(); ++d) {
        for (const GridCell* cell : by_depth[d]) {
          if (cell->rows.contains(t)) {
            fail(cell_text(*cell),
                 "token " + std::to_string(t) +
                     " is covered here but not at depth " +
                     std::to_string(depth));
            ok = false;
          }
        }
      }
    }
    if (!ok) return false;

    // Function cells sit inside exactly one form cell above and are
    // realized by exactly one form cell of identical span below.
    for (std::size_t d = 1; d < by_depth.size(); d += 2) {
      for (const GridCell* cell : by_depth[d]) {
        const GridCell* parent = nullptr;
        for (const GridCell* form : by_depth[d - 1]) {
          if (form->rows.contains(cell->rows)) {
            parent = form;
            break;
          }
        }
        if (!parent) {
          fail(cell_text(*cell), "not contained in one form cell above");
          ok = false;
        }
        const GridCell* realization = nullptr;
        if (d + 1 < by_depth.size()) {
          for (const GridCell* form : by_depth[d + 1]) {
            if (form->rows == cell->rows) {
              realization = form;
              break;
            }
          }
        }
        if (!realization) {
          fail(cell_text(*cell),
               "no form cell of identical span at depth " +
                   std::to_string(d + 1));
          ok = false;
        }
      }
    }
    // Every deep form cell must realize a function cell.
    for (std::size_t d = 2; d < by_depth.size(); d += 2) {
      for (const GridCell* cell : by_depth[d]) {
        bool matched = false;
        for (const GridCell* fn : by_depth[d - 1]) {
          if (fn->rows == cell->rows) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          fail(cell_text(*cell),
               "form cell has no function cell of identical span above");
          ok = false;
        }
      }
    }
    return ok;
  }

  // Function cell parts covered by `parts`, grouped by label.
  struct ChildGroup {
    std::string label;
    std::vector<const GridCell*> function_parts;
  };

  std::vector<ChildGroup> child_groups(const std::vector<Span>& parts,
                                       std::size_t fn_depth) {
    std::vector<ChildGroup> groups;
    if (fn_depth >= by_depth.size()) return groups;
    for (const GridCell* cell : by_depth[fn_depth]) {
      const bool inside = std::any_of(
          parts.begin(), parts.end(),
          [&](const Span& p) { return p.contains(cell->rows); });
      if (!inside) continue;
      auto it = std::find_if(groups.begin(), groups.end(), [&](auto& g) {
        return g.label == cell->label;
      });
      if (it == groups.end()) {
        groups.push_back({cell->label, {cell}});
      } else {
        it->function_parts.push_back(cell);
      }
    }
    return groups;
  }

  void check_part_flags(const std::vector<const GridCell*>& parts) {
    if (parts.size() == 1 && parts[0]->discontinuous) {
      fail(cell_text(*parts[0]),
           "discontinuity flag on a single contiguous cell");
    }
    if (parts.size() > 1) {
      for (const GridCell* p : parts) {
        if (!p->discontinuous) {
          fail(cell_text(*p),
               "part of a discontinuous constituent lacks the flag");
        }
      }
      for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i - 1]->rows.end == parts[i]->rows.start) {
          fail(cell_text(*parts[i]),
               "adjacent discontinuous parts must be one merged cell");
        }
      }
    }
  }

  ConstituencyNode build_node(const std::vector<Span>& parts,
                              const std::string& form_label,
                              const std::string& function_label,
                              std::size_t form_depth) {
    ConstituencyNode node;
    node.form_label = form_label;
    node.function_label = function_label;
    for (const Span& p : parts) {
      for (std::size_t t = p.start; t < p.end; ++t) {
        node.yield_tokens.push_back(t);
      }
    }
    std::sort(node.yield_tokens.begin(), node.yield_tokens.end());

    std::set<std::size_t> claimed;
    for (ChildGroup& group : child_groups(parts, form_depth + 1)) {
      std::sort(group.function_parts.begin(), group.function_parts.end(),
                [](const GridCell* a, const GridCell* b) {
                  return a->rows.start < b->rows.start;
                });
      check_part_flags(group.function_parts);
      std::vector<Span> child_parts;
      std::string child_form;
      for (const GridCell* fn : group.function_parts) {
        child_parts.push_back(fn->rows);
        for (std::size_t t = fn->rows.start; t < fn->rows.end; ++t) {
          claimed.insert(t);
        }
        // The realization exists and is unique (basic_checks).
        for (const GridCell* form : by_depth[form_depth + 2]) {
          if (form->rows == fn->rows) {
            if (child_form.empty()) {
              child_form = form->label;
            } else if (child_form != form->label) {
              fail(cell_text(*form),
                   "discontinuous parts disagree on the form label (\"" +
                       child_form + "\")");
            }
            break;
          }
        }
      }
      node.children.push_back(build_node(child_parts, child_form, group.label,
                                         form_depth + 2));
    }
    for (std::size_t t : node.yield_tokens) {
      if (!claimed.count(t)) node.children.push_back(TreeChild{t});
    }
    std::sort(node.children.begin(), node.children.end(),
              [](const TreeChild& a, const TreeChild& b) {
                return leftmost(a) < leftmost(b);
              });
    return node;
  }

  Forest build() {
    if (!basic_checks()) return {};
    Forest forest;
    if (by_depth.empty()) return forest;
    // Depth-0 cells group into roots; only discontinuous cells with the
    // same label and a gap between them merge into one root.
    const auto& top = by_depth[0];
    std::size_t i = 0;
    while (i < top.size()) {
      std::vector<const GridCell*> parts{top[i]};
      std::size_t j = i + 1;
      while (j < top.size() && top[j]->discontinuous &&
             top[i]->discontinuous && top[j]->label == top[i]->label) {
        parts.push_back(top[j]);
        ++j;
      }
      check_part_flags(parts);
      std::vector<Span> spans;
      for (const GridCell* p : parts) spans.push_back(p->rows);
      forest.push_back(build_node(spans, top[i]->label, top[i]->label, 0));
      i = j;
    }
    return forest;
  }
};

} // namespace

ValidationReport validate_grid(const GridDocument& grid) {
  GridReader reader(grid, /*strict=*/false);
  reader.build();
  ValidationReport report;
  report.errors = std::move(reader.errors);
  return report;
}

Forest grid_to_tree(const GridDocument& grid) {
  GridReader reader(grid, /*strict=*/true);
  return reader.build();
}

namespace {

void emit_cells(const ConstituencyNode& node, bool is_root, std::size_t level,
                std::vector<GridCell>& out) {
  if (node.yield_tokens.empty()) {
    throw StructureError("node \"" + node.form_label + "\" has an empty yield");
  }
  const std::vector<Span> runs = maximal_runs(node.yield_tokens);
  const bool disc = runs.size() > 1;
  for (const Span& run : runs) {
    if (is_root) {
      out.push_back({run, 0, node.form_label, CellKind::Form, disc});
    } else {
      out.push_back(
          {run, 2 * level - 1, node.function_label, CellKind::Function, disc});
      out.push_back({run, 2 * level, node.form_label, CellKind::Form, disc});
    }
  }
  std::set<std::string> seen;
  std::vector<std::size_t> child_tokens;
  for (const TreeChild& child : node.children) {
    if (std::holds_alternative<std::size_t>(child)) {
      child_tokens.push_back(std::get<std::size_t>(child));
      continue;
    }
    const auto& sub = std::get<ConstituencyNode>(child);
    if (!seen.insert(sub.function_label).second) {
      throw DuplicateFunction("function label \"" + sub.function_label +
                              "\" occurs twice under \"" + node.form_label +
                              "\"");
    }
    child_tokens.insert(child_tokens.end(), sub.yield_tokens.begin(),
                        sub.yield_tokens.end());
    emit_cells(sub, false, level + 1, out);
  }
  std::sort(child_tokens.begin(), child_tokens.end());
  if (std::adjacent_find(child_tokens.begin(), child_tokens.end()) !=
      child_tokens.end()) {
    throw StructureError("child yields under \"" + node.form_label +
                         "\" are not disjoint");
  }
  if (child_tokens != node.yield_tokens) {
    throw StructureError("yield of \"" + node.form_label +
                         "\" is not the union of its children");
  }
}

} // namespace

GridDocument tree_to_grid(const Forest& forest, std::size_t token_count) {
  GridDocument grid;
  grid.token_count = token_count;
  for (const ConstituencyNode& root : forest) {
    emit_cells(root, true, 0, grid.cells);
  }
  for (const GridCell& cell : grid.cells) {
    if (cell.rows.end > token_count) {
      throw StructureError(cell_text(cell) + ": exceeds token count " +
                           std::to_string(token_count));
    }
  }
  std::sort(grid.cells.begin(), grid.cells.end(),
            [](const GridCell& a, const GridCell& b) {
              if (a.depth != b.depth) return a.depth < b.depth;
              return a.rows.start < b.rows.start;
            });
  return grid;
}

HeadRules load_head_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();
  require_utf8(content, path);
  HeadRules rules;
  std::istringstream stream(content);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    rules.priority.push_back(line);
  }
  return rules;
}

namespace {

// Identifies the head child: explicit head mark, then the head-rule
// table, then the leftmost terminal, then the leftmost subtree.
struct HeadResolver {
  const HeadRules& rules;

  // Returns either the terminal index or a pointer to the head child.
  std::variant<std::size_t, const ConstituencyNode*> head_of(
      const ConstituencyNode& node) const {
    if (node.head_token) return *node.head_token;
    for (const std::string& label : rules.priority) {
      for (const TreeChild& child : node.children) {
        if (const auto* sub = std::get_if<ConstituencyNode>(&child)) {
          if (sub->function_label == label) return sub;
        }
      }
    }
    for (const TreeChild& child : node.children) {
      if (const auto* t = std::get_if<std::size_t>(&child)) return *t;
    }
    for (const TreeChild& child : node.children) {
      if (const auto* sub = std::get_if<ConstituencyNode>(&child)) return sub;
    }
    throw NoHeadFound("node \"" + node.form_label +
                      "\" has no head candidate");
  }

  std::size_t lexical_head(const ConstituencyNode& node) const {
    auto head = head_of(node);
    if (const auto* t = std::get_if<std::size_t>(&head)) return *t;
    return lexical_head(*std::get<const ConstituencyNode*>(head));
  }
};

} // namespace

std::vector<DependencyGraph> tree_to_dependency(
    const Forest& forest, const HeadRules& rules,
    std::span<const std::string> token_forms) {
  HeadResolver resolver{rules};
  std::vector<DependencyGraph> sentences;
  for (const ConstituencyNode& root : forest) {
    DependencyGraph graph;
    std::map<std::size_t, std::size_t> local; // global -> sentence index
    for (std::size_t t : root.yield_tokens) {
      local[t] = graph.tokens.size();
      DepToken token;
      if (t < token_forms.size()) token.form = token_forms[t];
      graph.tokens.push_back(std::move(token));
    }

    const auto attach = [&](const ConstituencyNode& node, const auto& self)
        -> void {
      const std::size_t h = resolver.lexical_head(node);
      const auto head = resolver.head_of(node);
      const ConstituencyNode* head_child =
          std::holds_alternative<const ConstituencyNode*>(head)
              ? std::get<const ConstituencyNode*>(head)
              : nullptr;
      for (const TreeChild& child : node.children) {
        if (const auto* t = std::get_if<std::size_t>(&child)) {
          if (*t == h) continue;
          graph.tokens[local.at(*t)].head = local.at(h);
          graph.tokens[local.at(*t)].relation = "tok";
          continue;
        }
        const auto& sub = std::get<ConstituencyNode>(child);
        if (&sub == head_child) {
          self(sub, self);
          continue;
        }
        const std::size_t sub_head = resolver.lexical_head(sub);
        graph.tokens[local.at(sub_head)].head = local.at(h);
        graph.tokens[local.at(sub_head)].relation = sub.function_label;
        self(sub, self);
      }
    };

    const std::size_t root_head = resolver.lexical_head(root);
    graph.tokens[local.at(root_head)].head = std::nullopt;
    graph.tokens[local.at(root_head)].relation = root.function_label;
    attach(root, attach);
    sentences.push_back(std::move(graph));
  }
  return sentences;
}

TreeConversion dependency_to_tree(const DependencyGraph& dep,
                                  std::size_t token_offset) {
  const std::size_t n = dep.tokens.size();
  std::vector<std::size_t> roots;
  std::vector<std::vector<std::size_t>> dependents(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& head = dep.tokens[i].head;
    if (!head) {
      roots.push_back(i);
    } else {
      if (*head >= n) {
        throw InvalidSpans("head index " + std::to_string(*head) +
                           " out of range");
      }
      dependents[*head].push_back(i);
    }
  }
  if (roots.size() > 1) {
    throw MultipleRoots("sentence has " + std::to_string(roots.size()) +
                        " roots");
  }
  if (roots.empty() && n > 0) {
    throw CycleDetected("sentence has no root; the head links form a cycle");
  }

  TreeConversion result;
  if (n == 0) return result;

  std::vector<char> visited(n, 0);
  const auto build = [&](std::size_t index, const auto& self)
      -> ConstituencyNode {
    if (visited[index]) {
      throw CycleDetected("token " + std::to_string(index) +
                          " reached twice; the head links form a cycle");
    }
    visited[index] = 1;
    ConstituencyNode node;
    const DepToken& token = dep.tokens[index];
    node.form_label = token.pos.empty() || token.pos == "_" ? "x" : token.pos;
    node.function_label = token.relation;
    node.head_token = token_offset + index;
    node.children.push_back(TreeChild{token_offset + index});
    node.yield_tokens.push_back(token_offset + index);

    std::map<std::string, std::size_t> label_uses;
    for (std::size_t j : dependents[index]) {
      ConstituencyNode child = self(j, self);
      const std::size_t uses = ++label_uses[child.function_label];
      if (uses > 1) {
        const std::string disambiguated =
            child.function_label + "#" + std::to_string(uses);
        result.warnings.push_back("relation \"" + child.function_label +
                                  "\" occurs " + std::to_string(uses) +
                                  " times under token " +
                                  std::to_string(index) + "; renamed to \"" +
                                  disambiguated + "\"");
        child.function_label = disambiguated;
      }
      node.yield_tokens.insert(node.yield_tokens.end(),
                               child.yield_tokens.begin(),
                               child.yield_tokens.end());
      node.children.push_back(TreeChild{std::move(child)});
    }
    std::sort(node.yield_tokens.begin(), node.yield_tokens.end());
    std::sort(node.children.begin(), node.children.end(),
              [](const TreeChild& a, const TreeChild& b) {
                return leftmost(a) < leftmost(b);
              });
    return node;
  };

  result.tree = build(roots[0], build);
  std::size_t reached = 0;
  for (char v : visited) reached += v;
  if (reached != n) {
    throw CycleDetected("only " + std::to_string(reached) + " of " +
                        std::to_string(n) +
                        " tokens reachable from the root; cycle present");
  }
  return result;
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string join_tokens(const std::vector<std::size_t>& tokens) {
  std::ostringstream os;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) os << ' ';
    os << tokens[i];
  }
  return os.str();
}

void write_struct_node(const ConstituencyNode& node, const std::string& id,
                       std::ostringstream& out) {
  out << "<node id=\"" << xml_escape(id) << "\" form=\""
      << xml_escape(node.form_label) << "\" function=\""
      << xml_escape(node.function_label) << "\" tokens=\""
      << join_tokens(node.yield_tokens) << "\"";
  if (node.head_token) out << " head=\"" << *node.head_token << "\"";
  out << ">\n";
  for (const TreeChild& child : node.children) {
    if (const auto* t = std::get_if<std::size_t>(&child)) {
      out << "  <terminal token=\"" << *t << "\"/>\n";
    } else {
      const auto& sub = std::get<ConstituencyNode>(child);
      out << "  <edge label=\"" << xml_escape(sub.function_label)
          << "\" node=\"" << xml_escape(id + "/" + sub.function_label)
          << "\"/>\n";
    }
  }
  out << "</node>\n";
  for (const TreeChild& child : node.children) {
    if (const auto* sub = std::get_if<ConstituencyNode>(&child)) {
      write_struct_node(*sub, id + "/" + sub->function_label, out);
    }
  }
}

} // namespace

StandoffFiles export_standoff(const LayeredText& doc, const Forest& forest) {
  StandoffFiles files;
  const std::string doc_id = doc.meta.id.empty() ? "doc" : doc.meta.id;

  {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<tokens doc=\"" << xml_escape(doc_id) << "\" count=\""
        << doc.size() << "\"";
    if (doc.meta.century != 0) out << " century=\"" << doc.meta.century << "\"";
    if (!doc.meta.text_type.empty()) {
      out << " type=\"" << xml_escape(doc.meta.text_type) << "\"";
    }
    if (doc.meta.col_label != ColLabel::Unlabeled) {
      out << " collabel=\""
          << (doc.meta.col_label == ColLabel::Orality ? "N" : "D") << "\"";
    }
    out << ">\n";
    for (std::size_t i = 0; i < doc.size(); ++i) {
      out << "<token id=\"t" << i << "\">" << xml_escape(doc.tokens.items[i])
          << "</token>\n";
    }
    out << "</tokens>\n";
    files.text_xml = out.str();
  }

  {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<markables doc=\"" << xml_escape(doc_id) << "\">\n";
    out << "<layer name=\"norm\">\n";
    for (std::size_t i = 0; i < doc.norm.items.size(); ++i) {
      if (doc.norm.items[i].empty()) continue;
      out << "<mark id=\"norm_" << i << "\" start=\"" << i << "\" end=\""
          << i + 1 << "\" value=\"" << xml_escape(doc.norm.items[i])
          << "\"/>\n";
    }
    out << "</layer>\n<layer name=\"source\">\n";
    for (std::size_t i = 0; i < doc.source_tokens.size(); ++i) {
      const auto& [span, text] = doc.source_tokens[i];
      out << "<mark id=\"src_" << i << "\" start=\"" << span.start
          << "\" end=\"" << span.end << "\" value=\"" << xml_escape(text)
          << "\"/>\n";
    }
    out << "</layer>\n<layer name=\"macro\">\n";
    for (std::size_t i = 0; i < doc.macro_units.size(); ++i) {
      const auto& unit = doc.macro_units[i];
      out << "<mark id=\"macro_" << i << "\" start=\"" << unit.span.start
          << "\" end=\"" << unit.span.end << "\" value=\""
          << to_string(unit.kind) << "\"/>\n";
    }
    out << "</layer>\n<layer name=\"orth\">\n";
    for (std::size_t i = 0; i < doc.orth_sentences.size(); ++i) {
      const Span& span = doc.orth_sentences[i];
      out << "<mark id=\"orth_" << i << "\" start=\"" << span.start
          << "\" end=\"" << span.end << "\" value=\"o\"/>\n";
    }
    out << "</layer>\n</markables>\n";
    files.mark_xml = out.str();
  }

  {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<structure doc=\"" << xml_escape(doc_id) << "\">\n";
    for (std::size_t i = 0; i < forest.size(); ++i) {
      write_struct_node(forest[i], "n" + std::to_string(i), out);
    }
    out << "</structure>\n";
    files.struct_xml = out.str();
  }
  return files;
}

} // namespace gridbank
