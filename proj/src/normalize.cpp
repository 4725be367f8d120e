#include "gridbank/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

namespace {

// One left-to-right pass, longest match first at each position.
std::u32string transliterate_pass(const std::u32string& input,
                                  const TransliterationTable& table,
                                  bool* changed) {
  std::u32string out;
  out.reserve(input.size());
  std::size_t pos = 0;
  while (pos < input.size()) {
    const TransliterationRule* best = nullptr;
    for (const auto& rule : table.rules) {
      if (rule.from.empty() || pos + rule.from.size() > input.size()) continue;
      if (input.compare(pos, rule.from.size(), rule.from) != 0) continue;
      if (!best || rule.from.size() > best->from.size()) best = &rule;
    }
    if (best) {
      out += best->to;
      pos += best->from.size();
      *changed = true;
    } else {
      out.push_back(input[pos]);
      ++pos;
    }
  }
  return out;
}

constexpr int kMaxTransliterationPasses = 16;

std::u32string transliterate_scalars(std::u32string value,
                                     const TransliterationTable& table) {
  for (int pass = 0; pass < kMaxTransliterationPasses; ++pass) {
    bool changed = false;
    value = transliterate_pass(value, table, &changed);
    if (!changed) return value;
  }
  throw ParseError("transliteration table does not converge");
}

} // namespace

std::string transliterate(std::string_view token,
                          const TransliterationTable& table) {
  return encode_utf8(transliterate_scalars(decode_utf8(token), table));
}

void NormalizationLexicon::add(const std::string& form,
                               std::size_t frequency) {
  if (auto it = index_.find(form); it != index_.end()) {
    entries[it->second].frequency += frequency;
    return;
  }
  index_[form] = entries.size();
  entries.push_back({form, decode_utf8(form), frequency});
}

std::vector<NormCandidate> normalize_token(std::string_view token,
                                           const TransliterationTable& table,
                                           const NormalizationLexicon& lexicon,
                                           std::size_t max_distance) {
  const std::u32string query = transliterate_scalars(decode_utf8(token), table);
  std::vector<NormCandidate> candidates;
  for (const auto& entry : lexicon.entries) {
    const std::size_t ldiff = entry.scalars.size() > query.size()
                                  ? entry.scalars.size() - query.size()
                                  : query.size() - entry.scalars.size();
    if (ldiff > max_distance) continue; // distance is at least the gap
    const std::size_t d = damerau_levenshtein(query, entry.scalars);
    if (d <= max_distance) {
      candidates.push_back({entry.form, d, entry.frequency});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const NormCandidate& a, const NormCandidate& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.form < b.form;
            });
  return candidates;
}

NormEvalResult evaluate_normalization(std::span<const std::string> originals,
                                      std::span<const std::string> system,
                                      std::span<const std::string> gold) {
  if (originals.size() != system.size() || originals.size() != gold.size()) {
    std::ostringstream msg;
    msg << "layer lengths differ: originals=" << originals.size()
        << " system=" << system.size() << " gold=" << gold.size();
    throw LengthMismatch(msg.str());
  }
  NormEvalResult result;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const std::string& orig = originals[i];
    const std::string& sys = system[i];
    const std::string& ref = gold[i];
    const bool needed = ref != orig;
    const bool hit = sys == ref;
    if (needed && hit) {
      ++result.true_positives;
      continue;
    }
    if (!needed && sys == orig) {
      ++result.true_negatives;
      continue;
    }
    if (needed) ++result.false_negatives;      // missed or wrong change
    if (sys != orig && !hit) ++result.false_positives;
    ++result.mismatches[{orig, sys, ref}];
  }
  const double tp = static_cast<double>(result.true_positives);
  result.precision = (result.true_positives + result.false_positives) > 0
                         ? tp / static_cast<double>(result.true_positives +
                                                    result.false_positives)
                         : 1.0;
  result.recall = (result.true_positives + result.false_negatives) > 0
                      ? tp / static_cast<double>(result.true_positives +
                                                 result.false_negatives)
                      : 1.0;
  result.f_score = (result.precision + result.recall) > 0
                       ? 2 * result.precision * result.recall /
                             (result.precision + result.recall)
                       : 0.0;
  return result;
}

DistanceProfile distance_profile(std::span<const std::string> originals,
                                 std::span<const std::string> system,
                                 std::span<const std::string> gold) {
  if (originals.size() != system.size() || originals.size() != gold.size()) {
    std::ostringstream msg;
    msg << "layer lengths differ: originals=" << originals.size()
        << " system=" << system.size() << " gold=" << gold.size();
    throw LengthMismatch(msg.str());
  }
  DistanceProfile profile;
  std::vector<std::size_t> ds, dg;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    if (gold[i] == originals[i]) continue; // only tokens that needed a change
    const std::size_t d_sys = damerau_levenshtein(originals[i], system[i]);
    const std::size_t d_gold = damerau_levenshtein(originals[i], gold[i]);
    ds.push_back(d_sys);
    dg.push_back(d_gold);
    ++profile.histogram_system[d_sys];
    ++profile.histogram_gold[d_gold];
  }
  profile.relevant = ds.size();
  if (ds.empty()) return profile; // defined stays false
  profile.defined = true;
  const auto mean_std = [](const std::vector<std::size_t>& values) {
    double mean = 0;
    for (std::size_t v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (std::size_t v : values) {
      const double d = static_cast<double>(v) - mean;
      var += d * d;
    }
    var /= static_cast<double>(values.size()); // population variance
    return std::pair<double, double>{mean, std::sqrt(var)};
  };
  std::tie(profile.mean_system, profile.std_system) = mean_std(ds);
  std::tie(profile.mean_gold, profile.std_gold) = mean_std(dg);
  return profile;
}

namespace {

std::vector<std::string> read_data_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
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

} // namespace

TransliterationTable load_transliteration(const std::string& path) {
  TransliterationTable table;
  for (const auto& line : read_data_lines(path)) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(path + ": entry needs historical<TAB>modern: " + line);
    }
    table.rules.push_back({decode_utf8(line.substr(0, tab)),
                           decode_utf8(line.substr(tab + 1))});
  }
  return table;
}

NormalizationLexicon load_normalization_lexicon(const std::string& path) {
  NormalizationLexicon lexicon;
  for (const auto& line : read_data_lines(path)) {
    const std::size_t tab = line.find('\t');
    std::string form = tab == std::string::npos ? line : line.substr(0, tab);
    std::size_t freq = 1;
    if (tab != std::string::npos) {
      freq = std::stoul(line.substr(tab + 1));
    }
    if (form.empty() || freq == 0) {
      throw ParseError(path + ": bad lexicon entry: " + line);
    }
    lexicon.add(form, freq);
  }
  return lexicon;
}

} // namespace gridbank
