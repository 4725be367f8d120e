#include "gridbank/tokenize.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

std::string_view to_string(SplitRuleKind kind) {
  switch (kind) {
    case SplitRuleKind::Contraction: return "contraction";
    case SplitRuleKind::PronAdverb: return "pron_adverb";
    case SplitRuleKind::Clitic: return "clitic";
    case SplitRuleKind::ParticleVerb: return "particle_verb";
  }
  return "?";
}

void ParticleVerbLexicon::add(const std::string& particle,
                              const std::string& base, std::size_t count) {
  entries[{particle, base}] += count;
  by_particle_[particle].insert(base);
}

bool ParticleVerbLexicon::contains_particle(const std::string& particle) const {
  return by_particle_.count(particle) > 0;
}

const std::set<std::string>* ParticleVerbLexicon::bases(
    const std::string& particle) const {
  auto it = by_particle_.find(particle);
  return it == by_particle_.end() ? nullptr : &it->second;
}

namespace {

bool all_lowercase(const std::u32string& s) {
  return std::none_of(s.begin(), s.end(),
                      [](char32_t c) { return is_upper_scalar(c); });
}

// Inflection endings accepted when matching a surface form against a
// lexicon base verb. Ablaut forms are not recognized; untypical forms stay
// unsplit, which is the intended bias.
const std::array<std::u32string, 11> kInflectionSuffixes = {
    U"e", U"st", U"t", U"en", U"n", U"et", U"est", U"te", U"test", U"tet",
    U"ten"};

std::u32string verb_stem(const std::u32string& base) {
  if (base.size() > 2 && base.ends_with(U"en")) {
    return base.substr(0, base.size() - 2);
  }
  if (base.size() > 1 && base.ends_with(U"n")) {
    return base.substr(0, base.size() - 1);
  }
  return base;
}

bool matches_verb_form(const std::u32string& form, const std::u32string& base) {
  const std::u32string stem = verb_stem(base);
  if (stem.empty() || form.size() <= stem.size()) return false;
  if (form.compare(0, stem.size(), stem) != 0) return false;
  const std::u32string tail = form.substr(stem.size());
  return std::find(kInflectionSuffixes.begin(), kInflectionSuffixes.end(),
                   tail) != kInflectionSuffixes.end();
}

SplitDecision identity_decision(const std::string& source,
                                std::size_t scalar_len) {
  SplitDecision d;
  d.source = source;
  d.parts.push_back({source, {0, scalar_len}});
  return d;
}

// The closed set of pronominal-adverb bases, longest first so that the
// historical extra-r variants (dar/wor + consonant-initial preposition)
// win over the bare base plus an unknown remainder.
const std::array<std::u32string, 6> kPronAdverbBases = {U"hier", U"dar",
                                                        U"wor",  U"hie",
                                                        U"da",   U"wo"};

struct Candidate {
  std::vector<SplitPart> parts;
};

// Boundary signature used to detect conflicting matches of one rule.
std::vector<std::size_t> boundaries(const Candidate& c) {
  std::vector<std::size_t> b;
  for (const auto& p : c.parts) b.push_back(p.chars.end);
  return b;
}

void require_consistent(const std::vector<Candidate>& candidates,
                        const std::string& source, SplitRuleKind kind) {
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (boundaries(candidates[i]) != boundaries(candidates[0])) {
      std::ostringstream msg;
      msg << "conflicting " << to_string(kind) << " splits for \"" << source
          << "\"";
      throw ConflictingRules(msg.str());
    }
  }
}

} // namespace

ParticleVerbLexicon harvest_particle_verbs(
    std::span<const std::string> tokens,
    const std::set<std::string>& particles) {
  // Decode the particle list once, longest first.
  std::vector<std::u32string> plist;
  plist.reserve(particles.size());
  for (const auto& p : particles) plist.push_back(decode_utf8(p));
  std::sort(plist.begin(), plist.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });

  ParticleVerbLexicon lexicon;
  for (const auto& token : tokens) {
    const std::u32string u = decode_utf8(token);
    if (u.size() < 5 || !all_lowercase(u)) continue;
    if (!(u.ends_with(U"en") || u.ends_with(U"n"))) continue;
    for (const auto& particle : plist) {
      if (u.size() <= particle.size() + 2) continue;
      if (u.compare(0, particle.size(), particle) != 0) continue;
      if (u.compare(particle.size(), 2, U"zu") != 0) continue;
      const std::u32string infinitive = u.substr(particle.size() + 2);
      if (infinitive.size() < 3) continue;
      lexicon.add(encode_utf8(particle), encode_utf8(infinitive));
      break; // longest matching particle wins
    }
  }
  return lexicon;
}

SplitDecision split_token(const std::string& source, const SplitRuleSet& rules,
                          const ParticleVerbLexicon& lexicon) {
  const std::u32string u = decode_utf8(source);
  const std::size_t n = u.size();
  if (n == 0) return identity_decision(source, 0);
  const std::u32string lower = to_lower(u);

  // 1. Contractions: exact table lookup.
  if (auto it = rules.contractions.find(source);
      it != rules.contractions.end()) {
    SplitDecision d;
    d.source = source;
    d.rule = SplitRuleKind::Contraction;
    std::size_t pos = 0;
    for (const auto& [emit, owned] : it->second.parts) {
      d.parts.push_back({emit, {pos, pos + owned}});
      pos += owned;
    }
    return d;
  }

  // 2. Pronominal adverbs: base + preposition, case-insensitive on the
  // base, the remainder must be a known preposition.
  {
    std::vector<Candidate> found;
    for (const auto& base : kPronAdverbBases) {
      if (n <= base.size()) continue;
      if (lower.compare(0, base.size(), base) != 0) continue;
      const std::string rest = encode_utf8(u.substr(base.size()));
      if (!rules.prepositions.count(encode_utf8(lower.substr(base.size())))) {
        continue;
      }
      Candidate c;
      c.parts.push_back(
          {encode_utf8(u.substr(0, base.size())), {0, base.size()}});
      c.parts.push_back({rest, {base.size(), n}});
      found.push_back(std::move(c));
    }
    if (!found.empty()) {
      require_consistent(found, source, SplitRuleKind::PronAdverb);
      SplitDecision d;
      d.source = source;
      d.rule = SplitRuleKind::PronAdverb;
      d.parts = std::move(found[0].parts);
      return d;
    }
  }

  // 3. Clitics: suffix patterns against the host lexicon. In a pattern
  // like "t+u" the text before '+' stays with the host; the rest is the
  // clitic's owned range.
  {
    std::vector<Candidate> found;
    for (const auto& pattern : rules.clitic_patterns) {
      std::u32string suffix = decode_utf8(pattern.suffix);
      std::size_t keep = 0; // scalars of the suffix kept by the host
      if (auto plus = suffix.find(U'+'); plus != std::u32string::npos) {
        keep = plus;
        suffix.erase(plus, 1);
      }
      if (suffix.empty() || n <= suffix.size()) continue;
      if (lower.compare(n - suffix.size(), suffix.size(), suffix) != 0) {
        continue;
      }
      const std::size_t host_end = n - suffix.size() + keep;
      if (host_end == 0) continue;
      const std::string host_lower = encode_utf8(lower.substr(0, host_end));
      if (!rules.clitic_hosts.count(host_lower)) continue;
      Candidate c;
      c.parts.push_back({encode_utf8(u.substr(0, host_end)), {0, host_end}});
      c.parts.push_back({pattern.expansion, {host_end, n}});
      found.push_back(std::move(c));
    }
    if (!found.empty()) {
      require_consistent(found, source, SplitRuleKind::Clitic);
      SplitDecision d;
      d.source = source;
      d.rule = SplitRuleKind::Clitic;
      d.parts = std::move(found[0].parts);
      return d;
    }
  }

  // 4. Particle verbs: particle + inflected form of a lexicon base verb.
  // Restricted to all-lowercase tokens; capitalized forms are nouns.
  if (all_lowercase(u)) {
    std::vector<Candidate> found;
    for (std::size_t cut = 1; cut + 1 < n; ++cut) {
      const std::string particle = encode_utf8(u.substr(0, cut));
      const std::set<std::string>* bases = lexicon.bases(particle);
      if (!bases) continue;
      const std::u32string rest = u.substr(cut);
      bool any = false;
      for (const auto& base : *bases) {
        if (matches_verb_form(rest, decode_utf8(base))) {
          any = true;
          break;
        }
      }
      if (!any) continue;
      Candidate c;
      c.parts.push_back({particle, {0, cut}});
      c.parts.push_back({encode_utf8(rest), {cut, n}});
      found.push_back(std::move(c));
    }
    if (!found.empty()) {
      require_consistent(found, source, SplitRuleKind::ParticleVerb);
      SplitDecision d;
      d.source = source;
      d.rule = SplitRuleKind::ParticleVerb;
      d.parts = std::move(found[0].parts);
      return d;
    }
  }

  return identity_decision(source, n);
}

LayeredText tokenize_document(const LayeredText& coarse,
                              const SplitRuleSet& rules,
                              const ParticleVerbLexicon& lexicon) {
  LayeredText fine;
  fine.meta = coarse.meta;
  for (std::size_t i = 0; i < coarse.tokens.items.size(); ++i) {
    const std::string& source = coarse.tokens.items[i];
    SplitDecision decision;
    try {
      decision = split_token(source, rules, lexicon);
    } catch (const ConflictingRules& e) {
      std::ostringstream msg;
      msg << e.what() << " (source token " << i << ")";
      throw ConflictingRules(msg.str());
    }
    const std::size_t first = fine.tokens.items.size();
    for (const auto& part : decision.parts) {
      fine.tokens.items.push_back(part.text);
    }
    fine.source_tokens.push_back(
        {{first, fine.tokens.items.size()}, source});
  }
  return fine;
}

SplitEvalResult evaluate_splits(std::span<const SplitDecision> predicted,
                                std::span<const SplitDecision> gold) {
  if (predicted.size() != gold.size()) {
    std::ostringstream msg;
    msg << "predicted has " << predicted.size() << " source tokens, gold has "
        << gold.size();
    throw LengthMismatch(msg.str());
  }
  SplitEvalResult result;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const SplitDecision& p = predicted[i];
    const SplitDecision& g = gold[i];
    if (p.source != g.source) {
      std::ostringstream msg;
      msg << "source token " << i << " differs: \"" << p.source << "\" vs \""
          << g.source << "\"";
      throw LengthMismatch(msg.str());
    }
    const bool equal_parts = p.parts == g.parts;
    if (g.is_split() && equal_parts) {
      ++result.true_positives;
      continue;
    }
    if (!g.is_split() && !p.is_split()) continue;
    if (p.is_split()) ++result.false_positives;
    if (g.is_split()) ++result.false_negatives;
    std::vector<std::string> ptexts, gtexts;
    for (const auto& part : p.parts) ptexts.push_back(part.text);
    for (const auto& part : g.parts) gtexts.push_back(part.text);
    result.mismatches.emplace_back(p.source, std::move(ptexts),
                                   std::move(gtexts));
  }
  const std::size_t tp = result.true_positives;
  result.precision = (tp + result.false_positives) > 0
                         ? static_cast<double>(tp) /
                               static_cast<double>(tp + result.false_positives)
                         : 1.0;
  result.recall = (tp + result.false_negatives) > 0
                      ? static_cast<double>(tp) /
                            static_cast<double>(tp + result.false_negatives)
                      : 1.0;
  result.f_score = (result.precision + result.recall) > 0
                       ? 2 * result.precision * result.recall /
                             (result.precision + result.recall)
                       : 0.0;
  return result;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::vector<std::string> read_data_lines(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();
  require_utf8(content, path);
  std::vector<std::string> lines;
  std::istringstream stream(content);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

} // namespace

std::set<std::string> load_word_list(const std::string& path) {
  std::set<std::string> words;
  for (const auto& line : read_data_lines(path)) {
    words.insert(split_tabs(line)[0]);
  }
  return words;
}

std::map<std::string, ContractionEntry> load_contractions(
    const std::string& path) {
  std::map<std::string, ContractionEntry> table;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split_tabs(line);
    if (fields.size() < 3) {
      throw ParseError(path + ": contraction entry needs source + 2 parts: " +
                       line);
    }
    ContractionEntry entry;
    std::size_t owned_total = 0;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      const std::size_t colon = f.rfind(':');
      if (colon == std::string::npos) {
        throw ParseError(path + ": part \"" + f + "\" lacks ':len'");
      }
      const std::string emit = f.substr(0, colon);
      const std::size_t owned = std::stoul(f.substr(colon + 1));
      if (emit.empty() || owned == 0) {
        throw ParseError(path + ": bad part \"" + f + "\"");
      }
      entry.parts.push_back({emit, owned});
      owned_total += owned;
    }
    if (owned_total != scalar_count(fields[0])) {
      throw ParseError(path + ": owned ranges of \"" + fields[0] +
                       "\" do not partition the source");
    }
    table[fields[0]] = std::move(entry);
  }
  return table;
}

std::vector<CliticPattern> load_clitic_patterns(const std::string& path) {
  std::vector<CliticPattern> patterns;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path + ": clitic entry needs pattern<TAB>expansion: " +
                       line);
    }
    patterns.push_back({fields[0], fields[1]});
  }
  return patterns;
}

ParticleVerbLexicon load_particle_verbs(const std::string& path) {
  ParticleVerbLexicon lexicon;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split_tabs(line);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path + ": entry needs particle<TAB>base[<TAB>freq]: " +
                       line);
    }
    std::size_t freq = 1;
    if (fields.size() >= 3 && !fields[2].empty()) freq = std::stoul(fields[2]);
    if (freq == 0) throw ParseError(path + ": zero frequency: " + line);
    lexicon.add(fields[0], fields[1], freq);
  }
  return lexicon;
}

std::string format_particle_verbs(const ParticleVerbLexicon& lexicon) {
  std::ostringstream out;
  for (const auto& [key, freq] : lexicon.entries) {
    out << key.first << '\t' << key.second << '\t' << freq << '\n';
  }
  return out.str();
}

SplitRuleSet load_split_rules(const std::string& dir) {
  SplitRuleSet rules;
  rules.contractions = load_contractions(dir + "/contractions.tsv");
  rules.prepositions = load_word_list(dir + "/prepositions.txt");
  rules.clitic_patterns = load_clitic_patterns(dir + "/clitics.tsv");
  rules.clitic_hosts = load_word_list(dir + "/clitic_hosts.txt");
  return rules;
}

} // namespace gridbank
