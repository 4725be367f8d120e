#ifndef GRIDBANK_NORMALIZE_HPP
#define GRIDBANK_NORMALIZE_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gridbank/core.hpp"

namespace gridbank {

// Candidate normalization of historical word forms: deterministic
// transliteration of historical glyphs followed by lexicon lookup ranked
// by edit distance, plus the evaluation harness for scoring any
// normalizer against gold normalizations. All comparisons are
// case-sensitive (capitalization differences are real normalizations).

struct TransliterationRule {
  std::u32string from;
  std::u32string to;
};

// Ordered replacement table. Rules apply left to right with
// longest-match-first at every position; passes repeat until the output
// is free of every historical sequence, so transliteration is idempotent.
// A table whose replacements keep reintroducing patterns does not
// converge and is rejected (well-formed glyph tables converge in one pass).
struct TransliterationTable {
  std::vector<TransliterationRule> rules;
};

std::string transliterate(std::string_view token,
                          const TransliterationTable& table);

struct NormalizationLexicon {
  struct Entry {
    std::string form;
    std::u32string scalars;
    std::size_t frequency = 1;
  };
  std::vector<Entry> entries; // unique forms

  void add(const std::string& form, std::size_t frequency);

private:
  std::map<std::string, std::size_t> index_; // form -> entries position
};

struct NormCandidate {
  std::string form;
  std::size_t distance = 0;
  std::size_t frequency = 0;
  bool operator==(const NormCandidate&) const = default;
};

// All lexicon forms within `max_distance` of the transliterated token,
// sorted by (distance ascending, frequency descending, form ascending).
// An exact transliterated match therefore always ranks first.
std::vector<NormCandidate> normalize_token(std::string_view token,
                                           const TransliterationTable& table,
                                           const NormalizationLexicon& lexicon,
                                           std::size_t max_distance);

struct NormEvalResult {
  std::size_t true_positives = 0;  // needed change made correctly
  std::size_t false_positives = 0; // change made that gold does not confirm
  std::size_t false_negatives = 0; // needed change missed or wrong
  std::size_t true_negatives = 0;  // correctly left unchanged
  double precision = 1.0;
  double recall = 1.0;
  double f_score = 1.0;
  // (original, system, gold) -> occurrence count, for every non-TP/TN token
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t>
      mismatches;
};

// Scores a system normalization layer against gold over the same
// originals. A wrong change (system differs from both original and gold
// where a change was needed) counts as both a false positive and a false
// negative. Throws LengthMismatch when the three layers differ in length.
NormEvalResult evaluate_normalization(std::span<const std::string> originals,
                                      std::span<const std::string> system,
                                      std::span<const std::string> gold);

struct DistanceProfile {
  bool defined = false;        // false when no token needed a change
  std::size_t relevant = 0;    // tokens with gold != original
  double mean_system = 0.0;    // mean d(original, system) over relevant
  double std_system = 0.0;     // population standard deviation
  double mean_gold = 0.0;      // mean d(original, gold) over relevant
  double std_gold = 0.0;
  std::map<std::size_t, std::size_t> histogram_system;
  std::map<std::size_t, std::size_t> histogram_gold;
};

// Edit-distance statistics restricted to the tokens that needed a change.
DistanceProfile distance_profile(std::span<const std::string> originals,
                                 std::span<const std::string> system,
                                 std::span<const std::string> gold);

// File loaders: transliteration table `historical<TAB>modern` (ordered),
// lexicon `form<TAB>frequency`.
TransliterationTable load_transliteration(const std::string& path);
NormalizationLexicon load_normalization_lexicon(const std::string& path);

} // namespace gridbank

#endif
