#ifndef GRIDBANK_TOKENIZE_HPP
#define GRIDBANK_TOKENIZE_HPP

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gridbank/core.hpp"

namespace gridbank {

// Rule-based splitting of coarse source tokens into the fine-grained
// analysis tokens: article contractions, pronominal adverbs, pronominal
// clitics and particle-verb forms. Rules are tried in a fixed priority
// order, closed class before open class:
//   contraction > pronominal adverb > clitic > particle verb
// Unknown cases are left unsplit (precision over recall).

enum class SplitRuleKind { Contraction, PronAdverb, Clitic, ParticleVerb };

std::string_view to_string(SplitRuleKind kind);

// One emitted sub-token together with the contiguous range of source
// characters (Unicode scalars) it owns. Owned ranges partition the source;
// the emitted text may differ from the owned text only by a documented
// expansion (e.g. clitic "s" is emitted as "es").
struct SplitPart {
  std::string text;
  Span chars;
  bool operator==(const SplitPart&) const = default;
};

struct SplitDecision {
  std::string source;
  std::vector<SplitPart> parts;
  std::optional<SplitRuleKind> rule;

  bool is_split() const { return parts.size() > 1; }
  bool operator==(const SplitDecision&) const = default;
};

struct ContractionEntry {
  // Emitted text plus number of owned source scalars, in order.
  std::vector<std::pair<std::string, std::size_t>> parts;
};

struct CliticPattern {
  std::string suffix;    // token suffix that carries the clitic
  std::string expansion; // emitted text for the clitic part
};

struct SplitRuleSet {
  std::map<std::string, ContractionEntry> contractions;
  std::set<std::string> prepositions;
  std::vector<CliticPattern> clitic_patterns;
  std::set<std::string> clitic_hosts; // lowercase host forms
};

struct ParticleVerbLexicon {
  // (particle, base verb) -> frequency
  std::map<std::pair<std::string, std::string>, std::size_t> entries;

  void add(const std::string& particle, const std::string& base,
           std::size_t count = 1);
  bool contains_particle(const std::string& particle) const;
  // Bases recorded for one particle, or nullptr.
  const std::set<std::string>* bases(const std::string& particle) const;

private:
  std::map<std::string, std::set<std::string>> by_particle_;
};

// Collects (particle, base verb) pairs from tokens of the shape
// particle + "zu" + infinitive, e.g. "loszulaufen" -> (los, laufen).
// Only all-lowercase tokens whose remainder ends in -en/-n are counted;
// when several particles match, the longest one wins. Non-matching
// tokens are skipped. The result does not depend on input order.
ParticleVerbLexicon harvest_particle_verbs(
    std::span<const std::string> tokens,
    const std::set<std::string>& particles);

// Splits one source token, or returns an identity decision. Throws
// ConflictingRules when two matches of the same priority disagree about
// the part boundaries (which signals a lexicon problem).
SplitDecision split_token(const std::string& source, const SplitRuleSet& rules,
                          const ParticleVerbLexicon& lexicon);

// Applies split_token to every source token of a coarsely tokenized
// document. The fine token layer is the concatenation of all parts in
// order; source_tokens records the span of fine tokens each source token
// owns. Metadata is carried through.
LayeredText tokenize_document(const LayeredText& coarse,
                              const SplitRuleSet& rules,
                              const ParticleVerbLexicon& lexicon);

struct SplitEvalResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f_score = 1.0;
  // (source token, predicted part texts, gold part texts)
  std::vector<std::tuple<std::string, std::vector<std::string>,
                         std::vector<std::string>>>
      mismatches;
};

// Scores predicted against gold decisions over the same source-token
// sequence. A token is a true positive when gold splits it and the
// predicted parts equal the gold parts; a wrongly split token counts as
// both a false positive and a false negative. With no splits anywhere
// all three ratios are reported as 1 by convention.
SplitEvalResult evaluate_splits(std::span<const SplitDecision> predicted,
                                std::span<const SplitDecision> gold);

// Lexicon file loaders. All files are UTF-8 TSV, one entry per line,
// '#'-prefixed lines are comments.
std::set<std::string> load_word_list(const std::string& path);
std::map<std::string, ContractionEntry> load_contractions(
    const std::string& path);
std::vector<CliticPattern> load_clitic_patterns(const std::string& path);
ParticleVerbLexicon load_particle_verbs(const std::string& path);
std::string format_particle_verbs(const ParticleVerbLexicon& lexicon);

// Loads contractions.tsv, prepositions.txt, clitics.tsv and
// clitic_hosts.txt from one directory.
SplitRuleSet load_split_rules(const std::string& dir);

} // namespace gridbank

#endif
