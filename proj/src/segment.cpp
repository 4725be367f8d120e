#include "gridbank/segment.hpp"

#include <algorithm>
#include <sstream>

namespace gridbank {

std::vector<Span> segment_orthographic(
    std::span<const std::string> tokens,
    const std::set<std::string>& terminators) {
  std::vector<Span> spans;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (terminators.count(tokens[i])) {
      spans.push_back({start, i + 1});
      start = i + 1;
    }
  }
  if (start < tokens.size()) {
    spans.push_back({start, tokens.size()});
  }
  return spans;
}

std::set<std::string> default_terminators() {
  return {".", "?", "!", ";", "/", "...", "…"};
}

namespace {

std::string span_text(const Span& s) {
  std::ostringstream os;
  os << "[" << s.start << "," << s.end << ")";
  return os.str();
}

} // namespace

PatternCounts extract_patterns(const LayeredText& doc) {
  PatternCounts counts;
  std::vector<std::vector<MacroKind>> per_sentence(doc.orth_sentences.size());

  for (const auto& unit : doc.macro_units) {
    bool placed = false;
    for (std::size_t si = 0; si < doc.orth_sentences.size(); ++si) {
      const Span& sent = doc.orth_sentences[si];
      if (sent.contains(unit.span)) {
        per_sentence[si].push_back(unit.kind);
        placed = true;
        break;
      }
      if (sent.overlaps(unit.span)) {
        counts.crossing.push_back(
            {"macro_unit " + span_text(unit.span),
             std::string(to_string(unit.kind)) +
                 " unit crosses orthographic sentence " + span_text(sent)});
        placed = true;
        break;
      }
    }
    if (!placed) {
      counts.uncovered.push_back(
          {"macro_unit " + span_text(unit.span),
           std::string(to_string(unit.kind)) +
               " unit lies outside every orthographic sentence"});
    }
  }

  for (const auto& kinds : per_sentence) {
    if (kinds.empty()) continue;
    std::ostringstream positional;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (i > 0) positional << ' ';
      positional << to_string(kinds[i]);
    }
    ++counts.positional[positional.str()];

    std::map<std::string, std::size_t> multiset;
    for (MacroKind k : kinds) ++multiset[std::string(to_string(k))];
    std::ostringstream combination;
    bool first = true;
    for (const auto& [kind, n] : multiset) {
      if (!first) combination << ' ';
      combination << kind << ':' << n;
      first = false;
    }
    ++counts.combination[combination.str()];
  }
  return counts;
}

namespace {

void require_tiling(std::span<const Span> spans, std::size_t n_tokens,
                    const char* name) {
  std::size_t prev_end = 0;
  for (const Span& s : spans) {
    if (s.start >= s.end || s.end > n_tokens || s.start < prev_end) {
      throw InvalidSpans(std::string(name) + ": span " + span_text(s) +
                         " does not tile a subset of [0," +
                         std::to_string(n_tokens) + ") in order");
    }
    prev_end = s.end;
  }
}

// True iff tokens i and i+1 belong to the same unit of the tiling.
std::vector<bool> same_unit_mask(std::span<const Span> spans,
                                 std::size_t n_tokens) {
  std::vector<bool> mask(n_tokens > 0 ? n_tokens - 1 : 0, false);
  for (const Span& s : spans) {
    for (std::size_t i = s.start; i + 1 < s.end; ++i) mask[i] = true;
  }
  return mask;
}

} // namespace

SegmentationAgreement segmentation_agreement(std::span<const Span> a,
                                             std::span<const Span> b,
                                             std::size_t n_tokens) {
  require_tiling(a, n_tokens, "first segmentation");
  require_tiling(b, n_tokens, "second segmentation");

  SegmentationAgreement result;
  if (n_tokens >= 2) {
    const std::vector<bool> ma = same_unit_mask(a, n_tokens);
    const std::vector<bool> mb = same_unit_mask(b, n_tokens);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
      if (ma[i] == mb[i]) ++agree;
    }
    result.token_assignment_agreement =
        static_cast<double>(agree) / static_cast<double>(ma.size());
  }

  if (!a.empty() || !b.empty()) {
    std::vector<Span> sa(a.begin(), a.end());
    std::vector<Span> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<Span> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(common));
    result.identical_unit_proportion =
        static_cast<double>(common.size()) /
        static_cast<double>(std::max(sa.size(), sb.size()));
  }
  return result;
}

} // namespace gridbank
