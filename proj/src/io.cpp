#include "gridbank/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

namespace {

constexpr std::string_view kContinuation = "|";
constexpr std::string_view kOpenBracket = "⟨";  // ⟨
constexpr std::string_view kCloseBracket = "⟩"; // ⟩
const char* const kFixedColumns[] = {"idx", "token", "norm",
                                     "src", "macro", "orth"};
constexpr std::size_t kFixedColumnCount = 6;

bool has_reserved(std::string_view value) {
  if (value.find('\t') != std::string_view::npos) return true;
  if (value.find('\n') != std::string_view::npos) return true;
  if (value.find(kContinuation) != std::string_view::npos) return true;
  if (value.find(kOpenBracket) != std::string_view::npos) return true;
  if (value.find(kCloseBracket) != std::string_view::npos) return true;
  return false;
}

void require_clean(std::string_view value, const std::string& what) {
  if (has_reserved(value)) {
    throw ValidationError(what + " contains a reserved character: \"" +
                          std::string(value) + "\"");
  }
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::vector<std::string> split_lines(std::string_view bytes) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= bytes.size()) {
    const std::size_t nl = bytes.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < bytes.size()) lines.emplace_back(bytes.substr(start));
      break;
    }
    lines.emplace_back(bytes.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message);
}

// Tracks one open merged cell while scanning a column downwards.
struct OpenCell {
  bool active = false;
  std::size_t start = 0;
  std::string label;
  bool discontinuous = false;
};

} // namespace

std::string write_grid(const LayeredText& doc, const GridDocument& grid) {
  std::ostringstream out;

  if (!doc.meta.id.empty() || doc.meta.century != 0 ||
      !doc.meta.text_type.empty() ||
      doc.meta.col_label != ColLabel::Unlabeled) {
    out << "#meta";
    if (!doc.meta.id.empty()) {
      require_clean(doc.meta.id, "metadata id");
      out << "\tid=" << doc.meta.id;
    }
    if (doc.meta.century != 0) out << "\tcentury=" << doc.meta.century;
    if (!doc.meta.text_type.empty()) {
      require_clean(doc.meta.text_type, "metadata type");
      out << "\ttype=" << doc.meta.text_type;
    }
    if (doc.meta.col_label != ColLabel::Unlabeled) {
      out << "\tlabel="
          << (doc.meta.col_label == ColLabel::Orality ? "N" : "D");
    }
    out << '\n';
  }

  const std::size_t n = doc.size();
  std::size_t depth_columns = 0;
  for (const GridCell& cell : grid.cells) {
    depth_columns = std::max(depth_columns, cell.depth + 1);
  }

  // Column values per row, assembled before trailing-empty trimming.
  std::vector<std::vector<std::string>> rows(
      n, std::vector<std::string>(kFixedColumnCount + depth_columns));
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][0] = std::to_string(i);
    require_clean(doc.tokens.items[i], "token " + std::to_string(i));
    rows[i][1] = doc.tokens.items[i];
    if (i < doc.norm.items.size()) {
      require_clean(doc.norm.items[i], "norm " + std::to_string(i));
      rows[i][2] = doc.norm.items[i];
    }
  }
  for (const auto& [span, text] : doc.source_tokens) {
    require_clean(text, "source token");
    if (span.end > n) throw ValidationError("source span out of range");
    rows[span.start][3] = text;
    for (std::size_t i = span.start + 1; i < span.end; ++i) {
      rows[i][3] = kContinuation;
    }
  }
  for (const MacroUnit& unit : doc.macro_units) {
    if (unit.span.end > n) throw ValidationError("macro span out of range");
    rows[unit.span.start][4] = std::string(to_string(unit.kind));
    for (std::size_t i = unit.span.start + 1; i < unit.span.end; ++i) {
      rows[i][4] = kContinuation;
    }
  }
  for (const Span& span : doc.orth_sentences) {
    if (span.end > n) throw ValidationError("sentence span out of range");
    rows[span.start][5] = "o";
    for (std::size_t i = span.start + 1; i < span.end; ++i) {
      rows[i][5] = kContinuation;
    }
  }
  for (const GridCell& cell : grid.cells) {
    if (cell.rows.end > n) {
      throw ValidationError("grid cell span out of range");
    }
    require_clean(cell.label, "cell label");
    std::string value = cell.discontinuous
                            ? std::string(kOpenBracket) + cell.label +
                                  std::string(kCloseBracket)
                            : cell.label;
    const std::size_t column = kFixedColumnCount + cell.depth;
    rows[cell.rows.start][column] = std::move(value);
    for (std::size_t i = cell.rows.start + 1; i < cell.rows.end; ++i) {
      rows[i][column] = kContinuation;
    }
  }

  out << "idx\ttoken\tnorm\tsrc\tmacro\torth";
  for (std::size_t d = 0; d < depth_columns; ++d) out << "\td" << d;
  out << '\n';
  for (const auto& row : rows) {
    std::size_t last = row.size();
    while (last > 0 && row[last - 1].empty()) --last;
    for (std::size_t c = 0; c < last; ++c) {
      if (c > 0) out << '\t';
      out << row[c];
    }
    out << '\n';
  }
  return out.str();
}

GridFile read_grid(std::string_view bytes) {
  require_utf8(bytes, "grid file");
  GridFile result;
  const std::vector<std::string> lines = split_lines(bytes);
  std::size_t line_no = 0;
  std::size_t header_index = 0;

  if (!lines.empty() && lines[0].rfind("#meta", 0) == 0) {
    header_index = 1;
    line_no = 1;
    for (const std::string& field : split_tabs(lines[0])) {
      if (field == "#meta") continue;
      const std::size_t eq = field.find('=');
      if (eq == std::string::npos) parse_fail(1, "bad meta field: " + field);
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "id") {
        result.doc.meta.id = value;
      } else if (key == "century") {
        result.doc.meta.century = std::stoi(value);
      } else if (key == "type") {
        result.doc.meta.text_type = value;
      } else if (key == "label") {
        if (value == "N") {
          result.doc.meta.col_label = ColLabel::Orality;
        } else if (value == "D") {
          result.doc.meta.col_label = ColLabel::Literacy;
        } else {
          parse_fail(1, "label must be N or D");
        }
      } else {
        parse_fail(1, "unknown meta key: " + key);
      }
    }
  }
  if (header_index >= lines.size()) {
    throw ParseError("missing header row");
  }
  const std::vector<std::string> header = split_tabs(lines[header_index]);
  if (header.size() < kFixedColumnCount) {
    parse_fail(header_index + 1, "header needs the six fixed columns");
  }
  for (std::size_t c = 0; c < kFixedColumnCount; ++c) {
    if (header[c] != kFixedColumns[c]) {
      parse_fail(header_index + 1,
                 "column " + std::to_string(c + 1) + " must be " +
                     kFixedColumns[c]);
    }
  }
  const std::size_t depth_columns = header.size() - kFixedColumnCount;
  for (std::size_t d = 0; d < depth_columns; ++d) {
    if (header[kFixedColumnCount + d] != "d" + std::to_string(d)) {
      parse_fail(header_index + 1, "depth columns must be d0, d1, ...");
    }
  }

  OpenCell open_src, open_macro, open_orth;
  std::vector<OpenCell> open_depth(depth_columns);
  bool norm_seen = false;

  const auto close_src = [&](std::size_t end) {
    if (!open_src.active) return;
    result.doc.source_tokens.push_back(
        {{open_src.start, end}, open_src.label});
    open_src.active = false;
  };
  const auto close_macro = [&](std::size_t end) {
    if (!open_macro.active) return;
    const auto kind = parse_macro_kind(open_macro.label);
    if (!kind) {
      parse_fail(line_no + 1, "unknown macro kind: " + open_macro.label);
    }
    result.doc.macro_units.push_back({{open_macro.start, end}, *kind});
    open_macro.active = false;
  };
  const auto close_orth = [&](std::size_t end) {
    if (!open_orth.active) return;
    result.doc.orth_sentences.push_back({open_orth.start, end});
    open_orth.active = false;
  };
  const auto close_depth = [&](std::size_t d, std::size_t end) {
    OpenCell& cell = open_depth[d];
    if (!cell.active) return;
    result.grid.cells.push_back(
        {{cell.start, end},
         d,
         cell.label,
         d % 2 == 0 ? CellKind::Form : CellKind::Function,
         cell.discontinuous});
    cell.active = false;
  };

  std::size_t row = 0;
  for (std::size_t li = header_index + 1; li < lines.size(); ++li) {
    line_no = li;
    const std::string& line = lines[li];
    if (line.empty() && li + 1 == lines.size()) break; // trailing newline
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() > header.size()) {
      parse_fail(li + 1, "more fields than header columns");
    }
    fields.resize(header.size());

    if (fields[0] != std::to_string(row)) {
      parse_fail(li + 1, "idx must be " + std::to_string(row));
    }
    result.doc.tokens.items.push_back(fields[1]);
    result.doc.norm.items.push_back(fields[2]);
    if (!fields[2].empty()) norm_seen = true;

    const auto column = [&](std::size_t index, OpenCell& open,
                            const auto& close, const char* what) {
      const std::string& value = fields[index];
      if (value == kContinuation) {
        if (!open.active) {
          parse_fail(li + 1, std::string("continuation without an open ") +
                                 what + " cell");
        }
        return;
      }
      close(row);
      if (value.empty()) return;
      open.active = true;
      open.start = row;
      open.discontinuous = false;
      open.label = value;
      if (value.size() >= kOpenBracket.size() + kCloseBracket.size() &&
          value.rfind(std::string(kOpenBracket), 0) == 0 &&
          value.find(kCloseBracket, value.size() - kCloseBracket.size()) !=
              std::string::npos) {
        open.discontinuous = true;
        open.label = value.substr(
            kOpenBracket.size(),
            value.size() - kOpenBracket.size() - kCloseBracket.size());
      }
      if (open.label.empty()) parse_fail(li + 1, "empty label");
    };

    column(3, open_src, close_src, "source");
    column(4, open_macro, close_macro, "macro");
    column(5, open_orth, close_orth, "sentence");
    if (fields[5] != kContinuation && !fields[5].empty() &&
        fields[5] != "o") {
      parse_fail(li + 1, "orth column value must be \"o\"");
    }
    for (std::size_t d = 0; d < depth_columns; ++d) {
      column(kFixedColumnCount + d, open_depth[d],
             [&](std::size_t end) { close_depth(d, end); }, "grid");
    }
    ++row;
  }
  close_src(row);
  close_macro(row);
  close_orth(row);
  for (std::size_t d = 0; d < depth_columns; ++d) close_depth(d, row);

  if (!norm_seen) result.doc.norm.items.clear();
  result.grid.token_count = row;
  std::sort(result.grid.cells.begin(), result.grid.cells.end(),
            [](const GridCell& a, const GridCell& b) {
              if (a.depth != b.depth) return a.depth < b.depth;
              return a.rows.start < b.rows.start;
            });

  const ValidationReport report = validate(result.doc);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "grid document is not well-formed:";
    for (const auto& issue : report.errors) {
      msg << "\n  " << issue.location << ": " << issue.message;
    }
    throw ValidationError(msg.str());
  }
  return result;
}

std::string write_dependency(std::span<const DependencyGraph> sentences) {
  std::ostringstream out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (s > 0) out << '\n';
    const DependencyGraph& sentence = sentences[s];
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const DepToken& token = sentence.tokens[i];
      require_clean(token.form, "form");
      require_clean(token.norm, "norm");
      require_clean(token.pos, "pos");
      require_clean(token.relation, "relation");
      if (token.head && *token.head >= sentence.tokens.size()) {
        throw ValidationError("head index out of range");
      }
      out << i + 1 << '\t' << token.form << '\t' << token.norm << '\t'
          << token.pos << '\t' << (token.head ? *token.head + 1 : 0) << '\t'
          << token.relation << '\n';
    }
  }
  return out.str();
}

namespace {

void check_cycles(const DependencyGraph& sentence, std::size_t first_line) {
  const std::size_t n = sentence.tokens.size();
  std::vector<std::vector<std::size_t>> dependents(n);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (sentence.tokens[i].head) {
      dependents[*sentence.tokens[i].head].push_back(i);
    } else {
      roots.push_back(i);
    }
  }
  std::vector<char> reached(n, 0);
  std::vector<std::size_t> stack = roots;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (reached[i]) continue;
    reached[i] = 1;
    for (std::size_t j : dependents[i]) stack.push_back(j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!reached[i]) {
      throw CycleDetected("sentence starting at line " +
                          std::to_string(first_line) +
                          ": head links contain a cycle (token " +
                          std::to_string(i + 1) + " unreachable)");
    }
  }
}

} // namespace

std::vector<DependencyGraph> read_dependency(std::string_view bytes) {
  require_utf8(bytes, "dependency file");
  std::vector<DependencyGraph> sentences;
  DependencyGraph current;
  std::size_t sentence_first_line = 1;

  const std::vector<std::string> lines = split_lines(bytes);
  const auto flush = [&](std::size_t line_no) {
    if (current.tokens.empty()) return;
    for (std::size_t i = 0; i < current.tokens.size(); ++i) {
      if (current.tokens[i].head && *current.tokens[i].head >=
                                        current.tokens.size()) {
        parse_fail(sentence_first_line + i,
                   "head index " +
                       std::to_string(*current.tokens[i].head + 1) +
                       " out of range for a sentence of " +
                       std::to_string(current.tokens.size()) + " tokens");
      }
    }
    check_cycles(current, sentence_first_line);
    sentences.push_back(std::move(current));
    current = {};
    sentence_first_line = line_no + 1;
  };

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.empty()) {
      flush(li + 1);
      sentence_first_line = li + 2;
      continue;
    }
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 6) {
      parse_fail(li + 1, "expected 6 tab-separated fields, got " +
                             std::to_string(fields.size()));
    }
    if (current.tokens.empty()) sentence_first_line = li + 1;
    std::size_t id = 0;
    std::size_t head = 0;
    try {
      id = std::stoul(fields[0]);
      head = std::stoul(fields[4]);
    } catch (const std::exception&) {
      parse_fail(li + 1, "id and head must be non-negative integers");
    }
    if (id != current.tokens.size() + 1) {
      parse_fail(li + 1, "token id must be " +
                             std::to_string(current.tokens.size() + 1));
    }
    DepToken token;
    token.form = fields[1];
    token.norm = fields[2];
    token.pos = fields[3];
    token.relation = fields[5];
    if (head > 0) token.head = head - 1;
    current.tokens.push_back(std::move(token));
  }
  flush(lines.size());
  return sentences;
}

LayeredText ingest_plaintext(std::string_view bytes) {
  require_utf8(bytes, "plaintext");
  LayeredText doc;
  std::size_t pos = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (pos < bytes.size()) {
    while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
    if (pos >= bytes.size()) break;
    std::size_t end = pos;
    while (end < bytes.size() && !is_space(bytes[end])) ++end;
    const std::string token(bytes.substr(pos, end - pos));
    const std::size_t index = doc.tokens.items.size();
    doc.tokens.items.push_back(token);
    doc.source_tokens.push_back({{index, index + 1}, token});
    pos = end;
  }
  return doc;
}

namespace {

std::string xml_unescape(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '&') {
      out.push_back(text[pos]);
      ++pos;
      continue;
    }
    if (text.compare(pos, 5, "&amp;") == 0) {
      out.push_back('&');
      pos += 5;
    } else if (text.compare(pos, 4, "&lt;") == 0) {
      out.push_back('<');
      pos += 4;
    } else if (text.compare(pos, 4, "&gt;") == 0) {
      out.push_back('>');
      pos += 4;
    } else if (text.compare(pos, 6, "&quot;") == 0) {
      out.push_back('"');
      pos += 6;
    } else {
      out.push_back(text[pos]);
      ++pos;
    }
  }
  return out;
}

struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string text; // content up to the next tag (for leaf elements)
  bool closing = false;
};

// Scans the restricted XML subset written by export_standoff: tags with
// double-quoted attributes and escaped text content, no CDATA, no
// comments, no nested text markup.
std::vector<XmlTag> scan_tags(std::string_view xml) {
  std::vector<XmlTag> tags;
  std::size_t pos = 0;
  while (pos < xml.size()) {
    const std::size_t open = xml.find('<', pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = xml.find('>', open);
    if (close == std::string_view::npos) {
      throw ParseError("standoff: unterminated tag");
    }
    std::string_view body = xml.substr(open + 1, close - open - 1);
    pos = close + 1;
    if (body.empty() || body[0] == '?' || body[0] == '!') continue;
    XmlTag tag;
    if (body[0] == '/') {
      tag.closing = true;
      body.remove_prefix(1);
    }
    if (!body.empty() && body.back() == '/') body.remove_suffix(1);
    std::size_t name_end = 0;
    while (name_end < body.size() && !std::isspace(
               static_cast<unsigned char>(body[name_end]))) {
      ++name_end;
    }
    tag.name = std::string(body.substr(0, name_end));
    std::size_t p = name_end;
    while (p < body.size()) {
      while (p < body.size() &&
             std::isspace(static_cast<unsigned char>(body[p]))) {
        ++p;
      }
      if (p >= body.size()) break;
      const std::size_t eq = body.find('=', p);
      if (eq == std::string_view::npos) break;
      const std::string key(body.substr(p, eq - p));
      const std::size_t q1 = body.find('"', eq);
      if (q1 == std::string_view::npos) {
        throw ParseError("standoff: attribute without quoted value");
      }
      const std::size_t q2 = body.find('"', q1 + 1);
      if (q2 == std::string_view::npos) {
        throw ParseError("standoff: unterminated attribute value");
      }
      tag.attrs[key] = xml_unescape(body.substr(q1 + 1, q2 - q1 - 1));
      p = q2 + 1;
    }
    if (!tag.closing) {
      const std::size_t next = xml.find('<', pos);
      if (next != std::string_view::npos && next > pos) {
        std::string_view raw = xml.substr(pos, next - pos);
        tag.text = xml_unescape(raw);
      }
    }
    tags.push_back(std::move(tag));
  }
  return tags;
}

std::size_t attr_index(const XmlTag& tag, const std::string& key) {
  const auto it = tag.attrs.find(key);
  if (it == tag.attrs.end()) {
    throw ParseError("standoff: <" + tag.name + "> lacks attribute " + key);
  }
  return std::stoul(it->second);
}

} // namespace

StandoffDoc read_standoff(std::string_view text_xml, std::string_view mark_xml,
                          std::string_view struct_xml) {
  require_utf8(text_xml, "standoff token file");
  require_utf8(mark_xml, "standoff markable file");
  require_utf8(struct_xml, "standoff structure file");

  StandoffDoc result;
  for (const XmlTag& tag : scan_tags(text_xml)) {
    if (tag.closing) continue;
    if (tag.name == "tokens") {
      if (const auto it = tag.attrs.find("doc"); it != tag.attrs.end()) {
        if (it->second != "doc") result.doc.meta.id = it->second;
      }
      if (const auto it = tag.attrs.find("century"); it != tag.attrs.end()) {
        result.doc.meta.century = std::stoi(it->second);
      }
      if (const auto it = tag.attrs.find("type"); it != tag.attrs.end()) {
        result.doc.meta.text_type = it->second;
      }
      if (const auto it = tag.attrs.find("collabel"); it != tag.attrs.end()) {
        result.doc.meta.col_label = it->second == "N" ? ColLabel::Orality
                                                      : ColLabel::Literacy;
      }
    } else if (tag.name == "token") {
      result.doc.tokens.items.push_back(tag.text);
    }
  }

  std::string layer;
  bool any_norm = false;
  std::vector<std::string> norm(result.doc.size());
  for (const XmlTag& tag : scan_tags(mark_xml)) {
    if (tag.name == "layer" && !tag.closing) {
      layer = tag.attrs.count("name") ? tag.attrs.at("name") : "";
      continue;
    }
    if (tag.name != "mark" || tag.closing) continue;
    const std::size_t start = attr_index(tag, "start");
    const std::size_t end = attr_index(tag, "end");
    const std::string value =
        tag.attrs.count("value") ? tag.attrs.at("value") : "";
    if (layer == "norm") {
      if (start < norm.size()) {
        norm[start] = value;
        any_norm = true;
      }
    } else if (layer == "source") {
      result.doc.source_tokens.push_back({{start, end}, value});
    } else if (layer == "macro") {
      const auto kind = parse_macro_kind(value);
      if (!kind) throw ParseError("standoff: unknown macro kind " + value);
      result.doc.macro_units.push_back({{start, end}, *kind});
    } else if (layer == "orth") {
      result.doc.orth_sentences.push_back({start, end});
    }
  }
  if (any_norm) result.doc.norm.items = std::move(norm);

  struct NodeProto {
    std::string form;
    std::string function;
    std::optional<std::size_t> head;
    std::vector<std::pair<bool, std::string>> children; // (is_node, ref)
  };
  std::map<std::string, NodeProto> nodes;
  std::vector<std::string> root_ids;
  std::string current;
  for (const XmlTag& tag : scan_tags(struct_xml)) {
    if (tag.name == "node" && !tag.closing) {
      current = tag.attrs.count("id") ? tag.attrs.at("id") : "";
      NodeProto proto;
      proto.form = tag.attrs.count("form") ? tag.attrs.at("form") : "";
      proto.function =
          tag.attrs.count("function") ? tag.attrs.at("function") : "";
      if (tag.attrs.count("head")) {
        proto.head = std::stoul(tag.attrs.at("head"));
      }
      nodes[current] = std::move(proto);
      if (current.find('/') == std::string::npos) root_ids.push_back(current);
    } else if (tag.name == "terminal" && !tag.closing) {
      nodes.at(current).children.push_back(
          {false, tag.attrs.at("token")});
    } else if (tag.name == "edge" && !tag.closing) {
      nodes.at(current).children.push_back({true, tag.attrs.at("node")});
    }
  }

  const auto build = [&](const std::string& id,
                         const auto& self) -> ConstituencyNode {
    const NodeProto& proto = nodes.at(id);
    ConstituencyNode node;
    node.form_label = proto.form;
    node.function_label = proto.function;
    node.head_token = proto.head;
    for (const auto& [is_node, ref] : proto.children) {
      if (is_node) {
        ConstituencyNode child = self(ref, self);
        node.yield_tokens.insert(node.yield_tokens.end(),
                                 child.yield_tokens.begin(),
                                 child.yield_tokens.end());
        node.children.push_back(TreeChild{std::move(child)});
      } else {
        const std::size_t token = std::stoul(ref);
        node.yield_tokens.push_back(token);
        node.children.push_back(TreeChild{token});
      }
    }
    std::sort(node.yield_tokens.begin(), node.yield_tokens.end());
    return node;
  };
  for (const std::string& id : root_ids) {
    result.forest.push_back(build(id, build));
  }
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename " + tmp + " to " + path);
  }
}

} // namespace gridbank
