#ifndef GRIDBANK_SEGMENT_HPP
#define GRIDBANK_SEGMENT_HPP

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridbank/core.hpp"

namespace gridbank {

// Baseline orthographic sentence splitter plus macro-unit pattern
// statistics and agreement metrics between two segmentations.

// Greedy split after every terminator token; trailing material without a
// terminator forms a final span. Output spans partition [0, n) and are
// never empty. Terminators are whole tokens (e.g. "." or "/" or "...").
std::vector<Span> segment_orthographic(std::span<const std::string> tokens,
                                       const std::set<std::string>& terminators);

// Default terminator set; slashes served as sentence delimiters in texts
// printed before 1700.
std::set<std::string> default_terminators();

struct PatternCounts {
  // Positional form, e.g. "s kg s" -> count.
  std::map<std::string, std::size_t> positional;
  // Order-insensitive combination form, e.g. "kg:1 s:2" -> count.
  std::map<std::string, std::size_t> combination;
  // Macro units straddling an orthographic sentence boundary. These are
  // reported, not dropped: they are exactly the interesting cases.
  std::vector<ValidationIssue> crossing;
  // Macro units outside every orthographic sentence.
  std::vector<ValidationIssue> uncovered;
};

// For each orthographic sentence, the ordered sequence of macro kinds it
// contains is one positional pattern occurrence. Sentences without any
// macro unit contribute nothing. The positional type count is always >=
// the combination type count.
PatternCounts extract_patterns(const LayeredText& doc);

struct SegmentationAgreement {
  // Fraction of adjacent token pairs (i, i+1) on which the two
  // segmentations agree about "same unit vs. different unit".
  double token_assignment_agreement = 1.0;
  // |a intersect b| / max(|a|, |b|) counting exact span equality.
  double identical_unit_proportion = 1.0;
};

// Both metrics are symmetric; empty vs. empty is perfect agreement by
// convention. Throws InvalidSpans when a span list does not tile a subset
// of [0, n_tokens) in order.
SegmentationAgreement segmentation_agreement(std::span<const Span> a,
                                             std::span<const Span> b,
                                             std::size_t n_tokens);

} // namespace gridbank

#endif
