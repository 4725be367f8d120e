#include "gridbank/core.hpp"

#include <algorithm>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

std::string_view to_string(MacroKind kind) {
  switch (kind) {
    case MacroKind::Sentence: return "s";
    case MacroKind::Cohesion: return "kg";
    case MacroKind::NonSentence: return "ni";
  }
  return "s";
}

std::optional<MacroKind> parse_macro_kind(std::string_view text) {
  if (text == "s") return MacroKind::Sentence;
  if (text == "kg") return MacroKind::Cohesion;
  if (text == "ni") return MacroKind::NonSentence;
  return std::nullopt;
}

std::size_t damerau_levenshtein(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;

  // Three rolling rows: i-2, i-1, i. Row width m+1.
  std::vector<std::size_t> prev2(m + 1), prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      const std::size_t del = prev[j] + 1;
      const std::size_t ins = cur[j - 1] + 1;
      std::size_t best = std::min({subst, del, ins});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        best = std::min(best, prev2[j - 2] + 1);
      }
      cur[j] = best;
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[m];
}

std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
  return damerau_levenshtein(decode_utf8(a), decode_utf8(b));
}

namespace {

std::string span_text(const Span& s) {
  std::ostringstream os;
  os << "[" << s.start << "," << s.end << ")";
  return os.str();
}

void check_span_list(const std::vector<Span>& spans, std::size_t n_tokens,
                     const std::string& layer, ValidationReport& report) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Span& s = spans[i];
    if (s.start >= s.end || s.end > n_tokens) {
      report.errors.push_back(
          {layer + " " + span_text(s),
           "span out of range for a document of " + std::to_string(n_tokens) +
               " tokens"});
    }
    if (i > 0) {
      const Span& p = spans[i - 1];
      if (s.start < p.end) {
        report.errors.push_back(
            {layer + " " + span_text(p) + " / " + span_text(s),
             p.overlaps(s) ? "spans overlap" : "spans out of order"});
      }
    }
  }
}

} // namespace

ValidationReport validate(const LayeredText& doc) {
  ValidationReport report;
  const std::size_t n = doc.size();

  if (!doc.norm.items.empty() && doc.norm.items.size() != n) {
    report.errors.push_back(
        {"layer norm", "token-aligned layer has " +
                           std::to_string(doc.norm.items.size()) +
                           " items for " + std::to_string(n) + " tokens"});
  }

  // A populated source layer must partition [0, n). An empty list means
  // the layer was never filled, which is fine for hand-built documents.
  if (!doc.source_tokens.empty()) {
    std::size_t expected = 0;
    bool partition_ok = true;
    for (const auto& [span, text] : doc.source_tokens) {
      if (span.start != expected || span.end <= span.start) {
        partition_ok = false;
        break;
      }
      expected = span.end;
    }
    if (partition_ok && expected != n) partition_ok = false;
    if (!partition_ok) {
      report.errors.push_back(
          {"source_tokens",
           "spans do not partition [0," + std::to_string(n) + ")"});
    }
  }

  std::vector<Span> macro_spans;
  macro_spans.reserve(doc.macro_units.size());
  for (const auto& unit : doc.macro_units) macro_spans.push_back(unit.span);
  check_span_list(macro_spans, n, "macro_units", report);
  check_span_list(doc.orth_sentences, n, "orth_sentences", report);

  if (doc.meta.century != 0 && doc.meta.century != 17 &&
      doc.meta.century != 18 && doc.meta.century != 19) {
    report.warnings.push_back(
        {"metadata", "century " + std::to_string(doc.meta.century) +
                         " outside the expected range {17,18,19}"});
  }
  return report;
}

} // namespace gridbank
