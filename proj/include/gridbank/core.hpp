#ifndef GRIDBANK_CORE_HPP
#define GRIDBANK_CORE_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridbank/errors.hpp"

namespace gridbank {

// Token indices are the universal coordinate system of a document.
// Character offsets are derived where needed and never stored.
struct Span {
  std::size_t start = 0; // inclusive
  std::size_t end = 0;   // exclusive

  std::size_t size() const { return end - start; }
  bool empty() const { return end <= start; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  bool contains(const Span& other) const {
    return other.start >= start && other.end <= end;
  }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  auto operator<=>(const Span&) const = default;
};

// The three macro units of text analysis: grammatical sentences (s),
// units of cohesion (kg) and non-sentences (ni).
enum class MacroKind { Sentence, Cohesion, NonSentence };

std::string_view to_string(MacroKind kind);
std::optional<MacroKind> parse_macro_kind(std::string_view text);

struct MacroUnit {
  Span span;
  MacroKind kind = MacroKind::Sentence;
  auto operator<=>(const MacroUnit&) const = default;
};

struct TokenLayer {
  std::string name;
  std::vector<std::string> items;
  auto operator<=>(const TokenLayer&) const = default;
};

enum class ColLabel { Unlabeled, Orality, Literacy }; // N / D classification

struct TextMetadata {
  std::string id;
  int century = 0; // 17, 18 or 19; 0 = unset
  std::string text_type;
  ColLabel col_label = ColLabel::Unlabeled;
  auto operator<=>(const TextMetadata&) const = default;
};

// A document as a token sequence with aligned layers. The `tokens` layer
// holds the fine-grained analysis tokens; `source_tokens` records which
// coarse source token each run of fine tokens came from; `norm` is a
// token-aligned normalization layer (empty = not populated).
struct LayeredText {
  TokenLayer tokens{"token", {}};
  TokenLayer norm{"norm", {}};
  std::vector<std::pair<Span, std::string>> source_tokens;
  std::vector<MacroUnit> macro_units;
  std::vector<Span> orth_sentences;
  TextMetadata meta;

  std::size_t size() const { return tokens.items.size(); }
  bool operator==(const LayeredText&) const = default;
};

struct ValidationIssue {
  std::string location;
  std::string message;
  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  bool ok() const { return errors.empty(); }
};

// Optimal string alignment distance: unit-cost insertions, deletions,
// substitutions and adjacent transpositions, where no element is edited
// twice. This restricted variant can violate the triangle inequality
// (d("ca","abc") = 3 > d("ca","ac") + d("ac","abc") = 2); callers that
// need a metric must not rely on it. Operates on Unicode scalar values.
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);
std::size_t damerau_levenshtein(std::u32string_view a, std::u32string_view b);

// Checks every structural invariant of LayeredText and reports each
// violation with its location. Problems are reported, never thrown.
ValidationReport validate(const LayeredText& doc);

} // namespace gridbank

#endif
