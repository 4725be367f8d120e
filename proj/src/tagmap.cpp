#include "gridbank/tagmap.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gridbank/unicode.hpp"

namespace gridbank {

std::string TagFeatures::field(std::size_t index) const {
  switch (index) {
    case 0: return token;
    case 1: return norm;
    case 2: return native_pos;
    case 3: return donor;
    case 4: return parent_function;
    case 5: return parent_form;
    case 6: return grandparent_form;
    case 7: return suffix;
  }
  return {};
}

namespace {

// Node directly holding `index` as a terminal, plus its parent's form.
struct TokenHome {
  const ConstituencyNode* node = nullptr;
  const ConstituencyNode* parent = nullptr;
};

TokenHome find_home(const ConstituencyNode& node,
                    const ConstituencyNode* parent, std::size_t index) {
  for (const TreeChild& child : node.children) {
    if (const auto* t = std::get_if<std::size_t>(&child)) {
      if (*t == index) return {&node, parent};
    } else {
      const auto& sub = std::get<ConstituencyNode>(child);
      if (std::binary_search(sub.yield_tokens.begin(), sub.yield_tokens.end(),
                             index)) {
        return find_home(sub, &node, index);
      }
    }
  }
  return {};
}

} // namespace

TagFeatures extract_features(const LayeredText& doc, const Forest& forest,
                             std::size_t index, const TagLayers& layers) {
  TagFeatures features;
  features.token = index < doc.tokens.items.size() ? doc.tokens.items[index]
                                                   : std::string{};
  if (index < doc.norm.items.size()) features.norm = doc.norm.items[index];
  if (index < layers.native_pos.size()) {
    features.native_pos = layers.native_pos[index];
  }
  if (index < layers.donor.size()) features.donor = layers.donor[index];

  const std::u32string scalars = decode_utf8(features.token);
  const std::size_t take = std::min<std::size_t>(3, scalars.size());
  features.suffix = encode_utf8(scalars.substr(scalars.size() - take));

  for (const ConstituencyNode& root : forest) {
    if (!std::binary_search(root.yield_tokens.begin(), root.yield_tokens.end(),
                            index)) {
      continue;
    }
    const TokenHome home = find_home(root, nullptr, index);
    if (home.node) {
      features.parent_function = home.node->function_label;
      features.parent_form = home.node->form_label;
      if (home.parent) features.grandparent_form = home.parent->form_label;
    }
    break;
  }
  return features;
}

std::vector<FeatureTemplate> default_templates() {
  return {
      {0, 1, 2, 3, 4, 5, 6, 7}, // full bundle
      {2, 4, 5},                // native tag + parent function/form
      {4, 7},                   // parent function + suffix
      {2},                      // native tag
      {7},                      // suffix
  };
}

namespace {

constexpr char kJoiner = '\x1f';

} // namespace

std::string BackoffModel::key_for(const TagFeatures& features,
                                  const FeatureTemplate& tmpl) const {
  std::string key;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (i > 0) key.push_back(kJoiner);
    key += features.field(tmpl[i]);
  }
  return key;
}

namespace {

// Majority tag with lexicographic tie-break; the map is ordered, so the
// first strict maximum is the smallest tag among the maxima.
const std::string& majority(const std::map<std::string, std::size_t>& counts) {
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [tag, count] : counts) {
    if (count > best_count) {
      best = &tag;
      best_count = count;
    }
  }
  return *best;
}

} // namespace

BackoffModel train(std::span<const std::pair<TagFeatures, std::string>> pairs,
                   std::vector<FeatureTemplate> templates) {
  if (pairs.empty()) throw EmptyTraining("no training pairs");
  BackoffModel model;
  model.templates = std::move(templates);
  model.tables.resize(model.templates.size());
  model.trained_pairs = pairs.size();
  std::map<std::string, std::size_t> global;
  for (const auto& [features, tag] : pairs) {
    ++global[tag];
    for (std::size_t t = 0; t < model.templates.size(); ++t) {
      ++model.tables[t][model.key_for(features, model.templates[t])][tag];
    }
  }
  model.global_majority = majority(global);
  return model;
}

std::pair<std::string, int> apply(const BackoffModel& model,
                                  const TagFeatures& features) {
  for (std::size_t t = 0; t < model.templates.size(); ++t) {
    const auto it =
        model.tables[t].find(model.key_for(features, model.templates[t]));
    if (it != model.tables[t].end()) {
      return {majority(it->second), static_cast<int>(t)};
    }
  }
  return {model.global_majority, -1};
}

std::vector<std::pair<std::size_t, double>> learning_curve(
    std::span<const std::pair<TagFeatures, std::string>> stream,
    std::span<const std::size_t> sizes,
    std::span<const std::pair<TagFeatures, std::string>> held_out) {
  std::vector<std::pair<std::size_t, double>> curve;
  for (std::size_t size : sizes) {
    if (size == 0 || size > stream.size()) {
      throw SizeExceedsData("train size " + std::to_string(size) +
                            " outside [1," + std::to_string(stream.size()) +
                            "]");
    }
    const BackoffModel model = train(stream.subspan(0, size));
    std::size_t correct = 0;
    for (const auto& [features, tag] : held_out) {
      if (apply(model, features).first == tag) ++correct;
    }
    curve.push_back({size, held_out.empty()
                               ? 1.0
                               : static_cast<double>(correct) /
                                     static_cast<double>(held_out.size())});
  }
  return curve;
}

namespace {

std::string escape(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape(std::string_view raw) {
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '\\' || i + 1 == raw.size()) {
      out.push_back(raw[i]);
      continue;
    }
    ++i;
    switch (raw[i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      default: out.push_back(raw[i]);
    }
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

constexpr std::string_view kModelMagic = "gridbank-tagmap\t1";

} // namespace

std::string format_model(const BackoffModel& model) {
  std::ostringstream out;
  out << kModelMagic << '\n';
  out << "templates";
  for (const FeatureTemplate& tmpl : model.templates) {
    out << '\t';
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
      if (i > 0) out << ',';
      out << tmpl[i];
    }
  }
  out << '\n';
  out << "global\t" << escape(model.global_majority) << '\t'
      << model.trained_pairs << '\n';
  for (std::size_t t = 0; t < model.tables.size(); ++t) {
    std::vector<const std::string*> keys;
    keys.reserve(model.tables[t].size());
    for (const auto& [key, counts] : model.tables[t]) keys.push_back(&key);
    std::sort(keys.begin(), keys.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (const std::string* key : keys) {
      for (const auto& [tag, count] : model.tables[t].at(*key)) {
        out << t << '\t' << escape(*key) << '\t' << escape(tag) << '\t'
            << count << '\n';
      }
    }
  }
  return out.str();
}

BackoffModel parse_model(std::string_view bytes) {
  require_utf8(bytes, "tagmap model");
  std::istringstream stream{std::string(bytes)};
  std::string line;
  if (!std::getline(stream, line) || line != kModelMagic) {
    throw ParseError("tagmap model: unknown header");
  }
  BackoffModel model;
  if (!std::getline(stream, line)) throw ParseError("tagmap model: truncated");
  {
    const auto fields = split_tabs(line);
    if (fields.empty() || fields[0] != "templates") {
      throw ParseError("tagmap model: missing template line");
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      FeatureTemplate tmpl;
      std::istringstream ids(fields[i]);
      std::string id;
      while (std::getline(ids, id, ',')) {
        tmpl.push_back(std::stoul(id));
      }
      model.templates.push_back(std::move(tmpl));
    }
  }
  model.tables.resize(model.templates.size());
  if (!std::getline(stream, line)) throw ParseError("tagmap model: truncated");
  {
    const auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0] != "global") {
      throw ParseError("tagmap model: missing global line");
    }
    model.global_majority = unescape(fields[1]);
    model.trained_pairs = std::stoul(fields[2]);
  }
  std::size_t line_no = 3;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw ParseError("tagmap model line " + std::to_string(line_no) +
                       ": expected 4 fields");
    }
    const std::size_t t = std::stoul(fields[0]);
    if (t >= model.tables.size()) {
      throw ParseError("tagmap model line " + std::to_string(line_no) +
                       ": template id out of range");
    }
    model.tables[t][unescape(fields[1])][unescape(fields[2])] =
        std::stoul(fields[3]);
  }
  return model;
}

void save_model(const BackoffModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << format_model(model);
}

BackoffModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

} // namespace gridbank
