#ifndef GRIDBANK_TAGMAP_HPP
#define GRIDBANK_TAGMAP_HPP

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridbank/treegrid.hpp"

namespace gridbank {

// Derives a target tagset from existing rich annotations: features are
// read off the token and its place in the constituency structure and fed
// to a deterministic frequency-backoff classifier. The classifier is a
// drop-in slot for any sequence model; determinism keeps evaluations
// exactly reproducible.

// Feature bundle for one token. The empty string is the explicit ABSENT
// value for fields that are unavailable (e.g. structural fields of a
// token outside every tree).
struct TagFeatures {
  std::string token;
  std::string norm;
  std::string native_pos;
  std::string donor;
  std::string parent_function;
  std::string parent_form;
  std::string grandparent_form;
  std::string suffix; // last 3 scalars of the token

  static constexpr std::size_t kFieldCount = 8;
  std::string field(std::size_t index) const;
  bool operator==(const TagFeatures&) const = default;
};

// Optional token-aligned tag layers feeding the native/donor fields.
struct TagLayers {
  std::vector<std::string> native_pos;
  std::vector<std::string> donor;
};

TagFeatures extract_features(const LayeredText& doc, const Forest& forest,
                             std::size_t index,
                             const TagLayers& layers = {});

// Feature-subset templates, most specific first. Prediction walks the
// templates in order and answers with the majority tag of the first
// tuple it has seen; ties break lexicographically.
using FeatureTemplate = std::vector<std::size_t>;

std::vector<FeatureTemplate> default_templates();

struct BackoffModel {
  std::vector<FeatureTemplate> templates;
  // per template: joined feature tuple -> tag -> count
  std::vector<std::unordered_map<std::string, std::map<std::string, std::size_t>>>
      tables;
  std::string global_majority;
  std::size_t trained_pairs = 0;

  std::string key_for(const TagFeatures& features,
                      const FeatureTemplate& tmpl) const;
};

// Throws EmptyTraining on an empty pair list. Counting is multiset-based,
// so the model does not depend on the input order.
BackoffModel train(
    std::span<const std::pair<TagFeatures, std::string>> pairs,
    std::vector<FeatureTemplate> templates = default_templates());

// Total: always produces a tag. Returns the matched template index, or
// -1 when only the global majority applied.
std::pair<std::string, int> apply(const BackoffModel& model,
                                  const TagFeatures& features);

// Trains on the first `size` pairs of the stream for every requested
// size and reports token accuracy on the held-out pairs. Sizes must be
// ascending and within the stream (throws SizeExceedsData).
std::vector<std::pair<std::size_t, double>> learning_curve(
    std::span<const std::pair<TagFeatures, std::string>> stream,
    std::span<const std::size_t> sizes,
    std::span<const std::pair<TagFeatures, std::string>> held_out);

// Versioned TSV serialization; round-trips to a model with identical
// predictions.
std::string format_model(const BackoffModel& model);
BackoffModel parse_model(std::string_view bytes);
void save_model(const BackoffModel& model, const std::string& path);
BackoffModel load_model(const std::string& path);

} // namespace gridbank

#endif
