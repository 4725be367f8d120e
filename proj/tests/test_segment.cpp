#include "gridbank/segment.hpp"

#include <random>

#include "doctest.h"

using namespace gridbank;

TEST_CASE("orthographic segmentation splits after terminators") {
  const std::set<std::string> dot = {"."};
  CHECK(segment_orthographic(std::vector<std::string>{"a", ".", "b", "."},
                             dot) == std::vector<Span>{{0, 2}, {2, 4}});
  CHECK(segment_orthographic(std::vector<std::string>{"a", "b"}, dot) ==
        std::vector<Span>{{0, 2}});
  const std::set<std::string> slash_dot = {".", "/"};
  CHECK(segment_orthographic(
            std::vector<std::string>{"x", "/", "y", ".", "z"}, slash_dot) ==
        std::vector<Span>{{0, 2}, {2, 4}, {4, 5}});
  CHECK(segment_orthographic({}, dot).empty());
}

TEST_CASE("orthographic spans partition the token range") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(0, 30);
  std::uniform_int_distribution<int> kind(0, 4);
  const std::set<std::string> terminators = default_terminators();
  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> tokens;
    for (int i = len(rng); i > 0; --i) {
      switch (kind(rng)) {
        case 0: tokens.push_back("."); break;
        case 1: tokens.push_back("/"); break;
        default: tokens.push_back("w"); break;
      }
    }
    const std::vector<Span> spans = segment_orthographic(tokens, terminators);
    std::size_t expected = 0;
    for (const Span& s : spans) {
      CHECK(s.start == expected);
      CHECK(s.end > s.start);
      expected = s.end;
    }
    CHECK(expected == tokens.size());
  }
}

namespace {

LayeredText doc_with(std::vector<MacroUnit> units, std::vector<Span> sentences,
                     std::size_t n) {
  LayeredText doc;
  for (std::size_t i = 0; i < n; ++i) doc.tokens.items.push_back("w");
  doc.macro_units = std::move(units);
  doc.orth_sentences = std::move(sentences);
  return doc;
}

} // namespace

TEST_CASE("macro pattern extraction") {
  SUBCASE("single sentence unit") {
    const PatternCounts counts = extract_patterns(
        doc_with({{{0, 3}, MacroKind::Sentence}}, {{0, 4}}, 4));
    CHECK(counts.positional.at("s") == 1);
    CHECK(counts.combination.at("s:1") == 1);
    CHECK(counts.crossing.empty());
  }

  SUBCASE("sentence cohesion sentence") {
    const PatternCounts counts = extract_patterns(
        doc_with({{{0, 2}, MacroKind::Sentence},
                  {{2, 3}, MacroKind::Cohesion},
                  {{3, 5}, MacroKind::Sentence}},
                 {{0, 6}}, 6));
    CHECK(counts.positional.at("s kg s") == 1);
    CHECK(counts.combination.at("kg:1 s:2") == 1);
  }

  SUBCASE("positional patterns fold into one combination") {
    const PatternCounts counts = extract_patterns(
        doc_with({{{0, 1}, MacroKind::Sentence},
                  {{1, 2}, MacroKind::Cohesion},
                  {{2, 3}, MacroKind::Sentence},
                  {{4, 5}, MacroKind::Sentence},
                  {{5, 6}, MacroKind::Sentence},
                  {{6, 7}, MacroKind::Cohesion}},
                 {{0, 4}, {4, 8}}, 8));
    CHECK(counts.positional.size() == 2);
    CHECK(counts.positional.at("s kg s") == 1);
    CHECK(counts.positional.at("s s kg") == 1);
    CHECK(counts.combination.size() == 1);
    CHECK(counts.combination.at("kg:1 s:2") == 2);
  }

  SUBCASE("crossing units are reported, not dropped") {
    const PatternCounts counts = extract_patterns(
        doc_with({{{2, 6}, MacroKind::Sentence}}, {{0, 4}, {4, 8}}, 8));
    REQUIRE(counts.crossing.size() == 1);
    CHECK(counts.crossing[0].location.find("[2,6)") != std::string::npos);
    CHECK(counts.positional.empty());
  }

  SUBCASE("uncovered units are reported") {
    const PatternCounts counts = extract_patterns(
        doc_with({{{5, 6}, MacroKind::NonSentence}}, {{0, 4}}, 8));
    REQUIRE(counts.uncovered.size() == 1);
  }
}

TEST_CASE("positional type count dominates combination type count") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> n_sentences(1, 6);
  std::uniform_int_distribution<int> n_units(1, 4);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int round = 0; round < 100; ++round) {
    std::vector<MacroUnit> units;
    std::vector<Span> sentences;
    std::size_t pos = 0;
    for (int s = n_sentences(rng); s > 0; --s) {
      const std::size_t start = pos;
      for (int u = n_units(rng); u > 0; --u) {
        units.push_back({{pos, pos + 1},
                         static_cast<MacroKind>(kind(rng))});
        ++pos;
      }
      sentences.push_back({start, pos});
    }
    const PatternCounts counts =
        extract_patterns(doc_with(units, sentences, pos));
    CHECK(counts.positional.size() >= counts.combination.size());
    std::size_t positional_total = 0, combination_total = 0;
    for (const auto& [k, v] : counts.positional) positional_total += v;
    for (const auto& [k, v] : counts.combination) combination_total += v;
    CHECK(positional_total == combination_total);
  }
}

TEST_CASE("segmentation agreement metrics") {
  SUBCASE("identical segmentations agree fully") {
    const std::vector<Span> spans = {{0, 2}, {2, 5}};
    const SegmentationAgreement r = segmentation_agreement(spans, spans, 5);
    CHECK(r.token_assignment_agreement == 1.0);
    CHECK(r.identical_unit_proportion == 1.0);
  }

  SUBCASE("one merged unit against two halves") {
    const std::vector<Span> whole = {{0, 4}};
    const std::vector<Span> halves = {{0, 2}, {2, 4}};
    const SegmentationAgreement r = segmentation_agreement(whole, halves, 4);
    CHECK(r.identical_unit_proportion == 0.0);
    CHECK(r.token_assignment_agreement == doctest::Approx(2.0 / 3.0));
  }

  SUBCASE("empty vs empty is perfect by convention") {
    const SegmentationAgreement r = segmentation_agreement({}, {}, 0);
    CHECK(r.token_assignment_agreement == 1.0);
    CHECK(r.identical_unit_proportion == 1.0);
  }

  SUBCASE("invalid spans throw") {
    const std::vector<Span> bad = {{2, 1}};
    CHECK_THROWS_AS(segmentation_agreement(bad, {}, 4), InvalidSpans);
    const std::vector<Span> out_of_range = {{0, 9}};
    CHECK_THROWS_AS(segmentation_agreement(out_of_range, {}, 4),
                    InvalidSpans);
  }
}

TEST_CASE("agreement metrics are symmetric") {
  std::mt19937 rng(37);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 12;
    const auto random_tiling = [&]() {
      std::vector<Span> spans;
      std::size_t pos = 0;
      while (pos < n) {
        std::size_t end = pos + 1;
        while (end < n && coin(rng)) ++end;
        if (coin(rng)) spans.push_back({pos, end}); // gaps allowed
        pos = end;
      }
      return spans;
    };
    const std::vector<Span> a = random_tiling();
    const std::vector<Span> b = random_tiling();
    const SegmentationAgreement ab = segmentation_agreement(a, b, n);
    const SegmentationAgreement ba = segmentation_agreement(b, a, n);
    CHECK(ab.token_assignment_agreement ==
          doctest::Approx(ba.token_assignment_agreement));
    CHECK(ab.identical_unit_proportion ==
          doctest::Approx(ba.identical_unit_proportion));
  }
}
