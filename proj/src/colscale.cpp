#include "gridbank/colscale.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridbank/tokenize.hpp"
#include "gridbank/unicode.hpp"

namespace gridbank {

const std::vector<std::string> kColFeatureNames = {
    "mean_tokens_per_sentence",      // grammatical sentences (macro kind s)
    "mean_tokens_per_orth_sentence",
    "interjection_rate",             // per 1,000 tokens
    "pronoun_rate",                  // 1st/2nd person, per 1,000 tokens
    "mean_syntactic_depth",          // grid levels covering a token
    "ni_rate",                       // non-sentences per macro unit
    "kg_rate",                       // cohesion units per macro unit
    "type_token_ratio",              // windowed, information-density proxy
    "subordinate_clause_rate",       // subordinate nodes per sentence
};

ColLexicons load_col_lexicons(const std::string& dir) {
  ColLexicons lexicons;
  lexicons.interjections = load_word_list(dir + "/interjections.txt");
  lexicons.pronouns = load_word_list(dir + "/pronouns_1_2.txt");
  lexicons.subordinate_labels = load_word_list(dir + "/subordinate_labels.txt");
  return lexicons;
}

namespace {

// 1 + number of levels below the node holding the token as a terminal:
// a token directly inside a macro cell sits at depth 1, one function/form
// pair below adds 2.
void token_depths(const ConstituencyNode& node, std::size_t level,
                  std::vector<std::size_t>& depths) {
  for (const TreeChild& child : node.children) {
    if (const auto* t = std::get_if<std::size_t>(&child)) {
      if (*t < depths.size()) depths[*t] = 2 * level + 1;
    } else {
      token_depths(std::get<ConstituencyNode>(child), level + 1, depths);
    }
  }
}

std::size_t count_subordinate(const ConstituencyNode& node,
                              const std::set<std::string>& labels) {
  std::size_t n = labels.count(node.form_label) ? 1 : 0;
  for (const TreeChild& child : node.children) {
    if (const auto* sub = std::get_if<ConstituencyNode>(&child)) {
      n += count_subordinate(*sub, labels);
    }
  }
  return n;
}

} // namespace

ColExtraction extract_col_features(const LayeredText& doc,
                                   const Forest* forest,
                                   const ColLexicons& lexicons) {
  const std::size_t n = doc.size();
  if (n == 0) throw EmptyDocument("cannot extract features from zero tokens");

  ColExtraction out;
  auto& f = out.features;
  for (const std::string& name : kColFeatureNames) f[name] = 0.0;

  std::size_t s_units = 0, kg_units = 0, ni_units = 0, s_tokens = 0;
  for (const MacroUnit& unit : doc.macro_units) {
    switch (unit.kind) {
      case MacroKind::Sentence:
        ++s_units;
        s_tokens += unit.span.size();
        break;
      case MacroKind::Cohesion: ++kg_units; break;
      case MacroKind::NonSentence: ++ni_units; break;
    }
  }
  const std::size_t total_units = s_units + kg_units + ni_units;
  if (s_units > 0) {
    f["mean_tokens_per_sentence"] =
        static_cast<double>(s_tokens) / static_cast<double>(s_units);
  } else {
    out.warnings.push_back("no grammatical sentences; sentence means are 0");
  }
  if (!doc.orth_sentences.empty()) {
    std::size_t orth_tokens = 0;
    for (const Span& s : doc.orth_sentences) orth_tokens += s.size();
    f["mean_tokens_per_orth_sentence"] =
        static_cast<double>(orth_tokens) /
        static_cast<double>(doc.orth_sentences.size());
  }
  if (total_units > 0) {
    f["ni_rate"] = static_cast<double>(ni_units) /
                   static_cast<double>(total_units);
    f["kg_rate"] = static_cast<double>(kg_units) /
                   static_cast<double>(total_units);
  }

  std::size_t interjections = 0, pronouns = 0;
  for (const std::string& token : doc.tokens.items) {
    const std::string lower = to_lower_utf8(token);
    if (lexicons.interjections.count(lower)) ++interjections;
    if (lexicons.pronouns.count(lower)) ++pronouns;
  }
  f["interjection_rate"] =
      1000.0 * static_cast<double>(interjections) / static_cast<double>(n);
  f["pronoun_rate"] =
      1000.0 * static_cast<double>(pronouns) / static_cast<double>(n);

  // Windowed type-token ratio over lowercased forms; documents shorter
  // than the window use a single whole-document window.
  {
    const std::size_t window = std::min(lexicons.ttr_window, n);
    double sum = 0;
    std::size_t windows = 0;
    for (std::size_t start = 0; start + window <= n; start += window) {
      std::set<std::string> types;
      for (std::size_t i = start; i < start + window; ++i) {
        types.insert(to_lower_utf8(doc.tokens.items[i]));
      }
      sum += static_cast<double>(types.size()) / static_cast<double>(window);
      ++windows;
    }
    if (windows > 0) f["type_token_ratio"] = sum / static_cast<double>(windows);
  }

  if (forest && !forest->empty()) {
    std::vector<std::size_t> depths(n, 0);
    std::size_t subordinate = 0;
    for (const ConstituencyNode& root : *forest) {
      token_depths(root, 0, depths);
      subordinate += count_subordinate(root, lexicons.subordinate_labels);
    }
    std::size_t covered = 0, depth_sum = 0;
    for (std::size_t d : depths) {
      if (d > 0) {
        ++covered;
        depth_sum += d;
      }
    }
    if (covered > 0) {
      f["mean_syntactic_depth"] = static_cast<double>(depth_sum) /
                                  static_cast<double>(covered);
    }
    if (s_units > 0) {
      f["subordinate_clause_rate"] = static_cast<double>(subordinate) /
                                     static_cast<double>(s_units);
    }
  } else {
    out.warnings.push_back(
        "no syntactic structure; depth and clause features are 0");
  }
  return out;
}

namespace {

double mean_of(std::span<const double> values) {
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values, double mean) {
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

} // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("pearson: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + " values");
  }
  if (x.size() < 2) {
    throw DegenerateInput("pearson needs at least two points");
  }
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) {
    throw DegenerateInput("pearson over a constant argument");
  }
  return sxy / std::sqrt(sxx * syy);
}

FeatureSelection select_features(const std::vector<std::vector<double>>& rows,
                                 const std::vector<std::string>& names,
                                 const std::vector<int>& labels,
                                 std::size_t k) {
  if (rows.size() != labels.size()) {
    throw LengthMismatch("one label per text required");
  }
  for (const auto& row : rows) {
    if (row.size() != names.size()) {
      throw LengthMismatch("feature row width does not match names");
    }
  }
  std::vector<double> coding(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    coding[i] = labels[i] ? 1.0 : 0.0;
  }

  FeatureSelection selection;
  std::vector<std::pair<std::string, double>> ranked;
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<double> column(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][c];
    const double m = mean_of(column);
    if (population_std(column, m) == 0) {
      selection.warnings.push_back("feature " + names[c] +
                                   " has zero variance; excluded");
      continue;
    }
    ranked.push_back({names[c], std::abs(pearson(column, coding))});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  selection.correlations = ranked;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    selection.selected.push_back(ranked[i].first);
  }
  return selection;
}

namespace {

constexpr double kPowerTolerance = 1e-10;
constexpr int kPowerMaxIterations = 100000;

double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Leading eigenvector of a symmetric PSD matrix by power iteration.
std::vector<double> leading_eigenvector(
    const std::vector<std::vector<double>>& matrix) {
  const std::size_t d = matrix.size();
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> next(d);
  // Deterministic restart vector in case the start is orthogonal to the
  // leading eigenspace.
  for (int attempt = 0; attempt < 2; ++attempt) {
    for (int iter = 0; iter < kPowerMaxIterations; ++iter) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < d; ++j) s += matrix[i][j] * v[j];
        next[i] = s;
      }
      const double len = norm2(next);
      if (len == 0) break; // start vector is in the null space
      for (double& x : next) x /= len;
      // Fix the per-iteration sign so convergence is detectable.
      double dot = 0;
      for (std::size_t i = 0; i < d; ++i) dot += next[i] * v[i];
      if (dot < 0) {
        for (double& x : next) x = -x;
      }
      double delta = 0;
      for (std::size_t i = 0; i < d; ++i) {
        delta = std::max(delta, std::abs(next[i] - v[i]));
      }
      v = next;
      if (delta < kPowerTolerance) return v;
    }
    // Restart from a fixed non-uniform direction.
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = 1.0 + 0.618 * static_cast<double>(i + 1);
    }
    const double len = norm2(v);
    for (double& x : v) x /= len;
  }
  throw DegenerateMatrix("power iteration did not converge");
}

} // namespace

ColModel fit_scale(const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& names) {
  if (rows.size() < 3) {
    throw DegenerateMatrix("need at least three texts to fit a scale");
  }
  const std::size_t d = names.size();
  for (const auto& row : rows) {
    if (row.size() != d) {
      throw LengthMismatch("feature row width does not match names");
    }
  }
  ColModel model;
  model.features = names;
  model.means.resize(d);
  model.stds.resize(d);
  const std::size_t n = rows.size();

  std::vector<std::vector<double>> z(n, std::vector<double>(d));
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = rows[r][c];
    model.means[c] = mean_of(column);
    model.stds[c] = population_std(column, model.means[c]);
    if (model.stds[c] == 0) {
      throw DegenerateMatrix("feature " + names[c] + " has zero variance");
    }
    for (std::size_t r = 0; r < n; ++r) {
      z[r][c] = (column[r] - model.means[c]) / model.stds[c];
    }
  }

  std::vector<std::vector<double>> corr(d, std::vector<double>(d, 0.0));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double s = 0;
      for (std::size_t r = 0; r < n; ++r) s += z[r][a] * z[r][b];
      corr[a][b] = corr[b][a] = s / static_cast<double>(n);
    }
  }

  model.loadings = leading_eigenvector(corr);

  // Orientation anchor: the sentence-length feature when present,
  // otherwise the alphabetically first feature.
  std::size_t anchor = 0;
  const auto it = std::find(names.begin(), names.end(),
                            "mean_tokens_per_sentence");
  if (it != names.end()) {
    anchor = static_cast<std::size_t>(it - names.begin());
  } else {
    anchor = static_cast<std::size_t>(
        std::min_element(names.begin(), names.end()) - names.begin());
  }
  model.orientation = 1;
  if (model.loadings[anchor] < 0) {
    model.orientation = -1;
    for (double& l : model.loadings) l = -l;
  }
  return model;
}

double score(const ColModel& model,
             const std::map<std::string, double>& features) {
  double value = 0;
  for (std::size_t i = 0; i < model.features.size(); ++i) {
    const auto it = features.find(model.features[i]);
    if (it == features.end()) {
      throw MissingFeature("feature " + model.features[i] + " missing");
    }
    value += model.loadings[i] * (it->second - model.means[i]) / model.stds[i];
  }
  return value;
}

std::vector<Span> segment_windows(std::size_t n_tokens, std::size_t window,
                                  std::size_t stride) {
  if (window == 0 || stride == 0) {
    throw InvalidWindow("window and stride must be positive");
  }
  std::vector<Span> spans;
  if (n_tokens == 0) return spans;
  if (n_tokens <= window) {
    spans.push_back({0, n_tokens});
    return spans;
  }
  for (std::size_t offset = 0; offset + window < n_tokens; offset += stride) {
    spans.push_back({offset, offset + window});
  }
  spans.push_back({n_tokens - window, n_tokens}); // anchored to the end
  return spans;
}

namespace {

void shift_node(ConstituencyNode& node, std::size_t offset) {
  for (std::size_t& t : node.yield_tokens) t -= offset;
  if (node.head_token) *node.head_token -= offset;
  for (TreeChild& child : node.children) {
    if (auto* t = std::get_if<std::size_t>(&child)) {
      *t -= offset;
    } else {
      shift_node(std::get<ConstituencyNode>(child), offset);
    }
  }
}

// Restriction of a document to one token window. Macro units, sentences
// and trees only survive when they lie fully inside the window.
void slice_document(const LayeredText& doc, const Forest* forest,
                    const Span& window, LayeredText& sub, Forest& sub_forest) {
  sub = LayeredText{};
  sub.meta = doc.meta;
  for (std::size_t i = window.start; i < window.end; ++i) {
    sub.tokens.items.push_back(doc.tokens.items[i]);
    if (i < doc.norm.items.size()) {
      sub.norm.items.push_back(doc.norm.items[i]);
    }
  }
  if (sub.norm.items.size() != sub.tokens.items.size()) sub.norm.items.clear();
  for (const MacroUnit& unit : doc.macro_units) {
    if (window.contains(unit.span)) {
      sub.macro_units.push_back(
          {{unit.span.start - window.start, unit.span.end - window.start},
           unit.kind});
    }
  }
  for (const Span& s : doc.orth_sentences) {
    if (window.contains(s)) {
      sub.orth_sentences.push_back(
          {s.start - window.start, s.end - window.start});
    }
  }
  sub_forest.clear();
  if (forest) {
    for (const ConstituencyNode& root : *forest) {
      if (root.yield_tokens.empty()) continue;
      if (root.yield_tokens.front() >= window.start &&
          root.yield_tokens.back() < window.end) {
        ConstituencyNode copy = root;
        shift_node(copy, window.start);
        sub_forest.push_back(std::move(copy));
      }
    }
  }
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0;
  if (sorted.size() == 1) return sorted[0];
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

SegmentReport segment_scores(const LayeredText& doc, const Forest* forest,
                             std::size_t window, std::size_t stride,
                             const ColModel& model,
                             const ColLexicons& lexicons) {
  SegmentReport report;
  if (doc.size() == 0) throw EmptyDocument("cannot segment zero tokens");
  if (doc.size() < window) {
    report.warnings.push_back(
        "document shorter than the window; scored as one segment");
  }
  for (const Span& span : segment_windows(doc.size(), window, stride)) {
    LayeredText sub;
    Forest sub_forest;
    slice_document(doc, forest, span, sub, sub_forest);
    ColExtraction extraction = extract_col_features(
        sub, sub_forest.empty() ? nullptr : &sub_forest, lexicons);
    report.segments.push_back({span, score(model, extraction.features)});
    for (std::string& w : extraction.warnings) {
      report.warnings.push_back("segment [" + std::to_string(span.start) +
                                "," + std::to_string(span.end) +
                                "): " + std::move(w));
    }
  }
  std::vector<double> values;
  values.reserve(report.segments.size());
  for (const SegmentScore& s : report.segments) values.push_back(s.value);
  std::sort(values.begin(), values.end());
  report.median = quantile(values, 0.5);
  report.iqr = quantile(values, 0.75) - quantile(values, 0.25);
  return report;
}

namespace {

std::string format_double(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

} // namespace

std::string format_col_model(const ColModel& model) {
  std::ostringstream out;
  out << "gridbank-colmodel\t1\n";
  out << "orientation\t" << model.orientation << '\n';
  for (std::size_t i = 0; i < model.features.size(); ++i) {
    out << model.features[i] << '\t' << format_double(model.means[i]) << '\t'
        << format_double(model.stds[i]) << '\t'
        << format_double(model.loadings[i]) << '\n';
  }
  return out.str();
}

ColModel parse_col_model(std::string_view bytes) {
  require_utf8(bytes, "col model");
  std::istringstream stream{std::string(bytes)};
  std::string line;
  if (!std::getline(stream, line) || line != "gridbank-colmodel\t1") {
    throw ParseError("col model: unknown header");
  }
  ColModel model;
  if (!std::getline(stream, line) || line.rfind("orientation\t", 0) != 0) {
    throw ParseError("col model: missing orientation line");
  }
  model.orientation = std::stoi(line.substr(12));
  std::size_t line_no = 2;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name, mean, stddev, loading;
    if (!std::getline(fields, name, '\t') ||
        !std::getline(fields, mean, '\t') ||
        !std::getline(fields, stddev, '\t') ||
        !std::getline(fields, loading, '\t')) {
      throw ParseError("col model line " + std::to_string(line_no) +
                       ": expected feature\tmean\tstd\tloading");
    }
    model.features.push_back(name);
    model.means.push_back(std::stod(mean));
    model.stds.push_back(std::stod(stddev));
    model.loadings.push_back(std::stod(loading));
  }
  if (model.features.empty()) throw ParseError("col model: no features");
  return model;
}

void save_col_model(const ColModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << format_col_model(model);
}

ColModel load_col_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_col_model(buffer.str());
}

} // namespace gridbank
