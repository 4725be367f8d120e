#ifndef GRIDBANK_COLSCALE_HPP
#define GRIDBANK_COLSCALE_HPP

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridbank/treegrid.hpp"

namespace gridbank {

// A single scale of conceptual orality vs. literacy per text: nine
// text-internal features, correlation-based feature selection against a
// binary expert classification, standardization plus the first principal
// component of the correlation matrix, and overlapping-window segment
// scores with representativeness statistics. Negative scores mark the
// orality pole, positive scores the literacy/distance pole.

// The nine feature names, in canonical order.
extern const std::vector<std::string> kColFeatureNames;

struct ColLexicons {
  std::set<std::string> interjections;       // lowercase forms
  std::set<std::string> pronouns;            // 1st/2nd person, lowercase
  std::set<std::string> subordinate_labels;  // clause form labels
  std::size_t ttr_window = 500;              // type-token ratio window
};

ColLexicons load_col_lexicons(const std::string& dir);

struct ColExtraction {
  std::map<std::string, double> features;
  std::vector<std::string> warnings;
};

// Deterministic per-text feature vector. The forest supplies the depth
// and clause features; without one they fall back to 0 with a warning.
// Throws EmptyDocument on a token-less document.
ColExtraction extract_col_features(const LayeredText& doc,
                                   const Forest* forest,
                                   const ColLexicons& lexicons);

struct FeatureSelection {
  std::vector<std::string> selected;
  // |point-biserial correlation| per surviving candidate
  std::vector<std::pair<std::string, double>> correlations;
  std::vector<std::string> warnings; // excluded zero-variance features
};

// Ranks candidates by |Pearson correlation against the 0/1 class coding|
// and keeps the top k; ties break by feature name. Zero-variance
// candidates are excluded with a warning.
FeatureSelection select_features(const std::vector<std::vector<double>>& rows,
                                 const std::vector<std::string>& names,
                                 const std::vector<int>& labels,
                                 std::size_t k);

struct ColModel {
  std::vector<std::string> features;
  std::vector<double> means;
  std::vector<double> stds;     // population standard deviations
  std::vector<double> loadings; // unit norm, orientation applied
  int orientation = 1;          // sign that was applied to the eigenvector
};

// Standardizes columns and extracts the first eigenvector of their
// correlation matrix by power iteration (tolerance 1e-10). The sign is
// fixed so that the anchor feature (mean tokens per grammatical
// sentence, when present) loads non-negatively: long sentences mark the
// literacy pole. Throws DegenerateMatrix on zero variance or
// non-convergence.
ColModel fit_scale(const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& names);

// Projection of the standardized feature vector onto the loadings.
// Throws MissingFeature when a model feature is absent.
double score(const ColModel& model,
             const std::map<std::string, double>& features);

struct SegmentScore {
  Span span;
  double value = 0.0;
};

struct SegmentReport {
  std::vector<SegmentScore> segments;
  double median = 0.0;
  double iqr = 0.0; // Q3 - Q1, linear-interpolation quantiles
  std::vector<std::string> warnings;
};

// Overlapping windows at offsets 0, stride, 2*stride, ... with the final
// window anchored to end at the last token; a document shorter than the
// window yields one whole-document segment with a warning. Each segment
// is scored through extract_col_features + score.
SegmentReport segment_scores(const LayeredText& doc, const Forest* forest,
                             std::size_t window, std::size_t stride,
                             const ColModel& model,
                             const ColLexicons& lexicons);

// Plain window offsets as used by segment_scores, exposed for reuse.
std::vector<Span> segment_windows(std::size_t n_tokens, std::size_t window,
                                  std::size_t stride);

// Product-moment correlation; throws DegenerateInput for fewer than two
// points or a constant argument.
double pearson(std::span<const double> x, std::span<const double> y);

std::string format_col_model(const ColModel& model);
ColModel parse_col_model(std::string_view bytes);
void save_col_model(const ColModel& model, const std::string& path);
ColModel load_col_model(const std::string& path);

} // namespace gridbank

#endif
