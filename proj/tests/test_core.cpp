#include "gridbank/core.hpp"

#include <random>

#include "doctest.h"
#include "gridbank/unicode.hpp"

using namespace gridbank;

namespace {

// Direct recursive transcription of the optimal-string-alignment
// definition: enumerates every alignment script. Exponential, test-only.
std::size_t osa_brute(std::u32string_view a, std::u32string_view b,
                      std::size_t i, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = osa_brute(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, osa_brute(a, b, i + 1, j) + 1);
  best = std::min(best, osa_brute(a, b, i, j + 1) + 1);
  if (i + 1 < a.size() && j + 1 < b.size() && a[i] == b[j + 1] &&
      a[i + 1] == b[j]) {
    best = std::min(best, osa_brute(a, b, i + 2, j + 2) + 1);
  }
  return best;
}

LayeredText three_token_doc() {
  LayeredText doc;
  doc.tokens.items = {"ein", "kleiner", "Text"};
  doc.source_tokens = {{{0, 1}, "ein"}, {{1, 2}, "kleiner"}, {{2, 3}, "Text"}};
  doc.macro_units = {{{0, 3}, MacroKind::Sentence}};
  doc.orth_sentences = {{0, 3}};
  return doc;
}

} // namespace

TEST_CASE("edit distance on quoted pairs") {
  CHECK(damerau_levenshtein("ward", "wart") == 1);
  CHECK(damerau_levenshtein("ab", "ba") == 1);
  CHECK(damerau_levenshtein("Verhältniffe", "Verhältnisse") == 2);
  CHECK(damerau_levenshtein("", "") == 0);
  CHECK(damerau_levenshtein("", "abc") == 3);
  CHECK(damerau_levenshtein("wider", "wieder") == 1);
}

TEST_CASE("edit distance counts scalars, not bytes") {
  // Umlaut vs base letter is one substitution even though the UTF-8
  // encodings differ in length.
  CHECK(damerau_levenshtein("für", "fur") == 1);
  // A combining mark is its own scalar.
  CHECK(damerau_levenshtein("uͤ", "u") == 1);
}

TEST_CASE("restricted transpositions can violate the triangle inequality") {
  // The documented OSA caveat: d(ca,abc) = 3 although ca->ac->abc costs 2.
  CHECK(damerau_levenshtein("ca", "abc") == 3);
  CHECK(damerau_levenshtein("ca", "ac") == 1);
  CHECK(damerau_levenshtein("ac", "abc") == 1);
}

TEST_CASE("edit distance equals exhaustive alignment search") {
  // All string pairs of length <= 4 over {a,b,c}; the full length-6
  // sweep lives in the acceptance suite.
  std::vector<std::u32string> strings{U""};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::u32string> next;
    for (const auto& s : strings) {
      if (s.size() + 1 == static_cast<std::size_t>(len)) {
        for (char32_t c : {U'a', U'b', U'c'}) next.push_back(s + c);
      }
    }
    // keep all shorter strings too
    for (auto& s : next) strings.push_back(std::move(s));
  }
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      CAPTURE(encode_utf8(a));
      CAPTURE(encode_utf8(b));
      REQUIRE(damerau_levenshtein(a, b) == osa_brute(a, b, 0, 0));
    }
  }
}

TEST_CASE("edit distance symmetry and identity") {
  std::mt19937 rng(4211);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> letter(0, 3);
  for (int round = 0; round < 500; ++round) {
    std::u32string a, b;
    for (int i = len(rng); i > 0; --i) a.push_back(U'a' + letter(rng));
    for (int i = len(rng); i > 0; --i) b.push_back(U'a' + letter(rng));
    CHECK(damerau_levenshtein(a, b) == damerau_levenshtein(b, a));
    CHECK(damerau_levenshtein(a, a) == 0);
    if (a != b) CHECK(damerau_levenshtein(a, b) > 0);
  }
}

TEST_CASE("validate accepts a well-formed document") {
  CHECK(validate(three_token_doc()).ok());
}

TEST_CASE("validate reports overlapping macro units") {
  LayeredText doc = three_token_doc();
  doc.macro_units = {{{0, 2}, MacroKind::Sentence},
                     {{1, 3}, MacroKind::Sentence}};
  const ValidationReport report = validate(doc);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].location.find("[0,2)") != std::string::npos);
  CHECK(report.errors[0].location.find("[1,3)") != std::string::npos);
}

TEST_CASE("validate reports a broken source partition") {
  LayeredText doc;
  doc.tokens.items = {"a", "b", "c", "d", "e", "f"};
  doc.source_tokens = {{{0, 5}, "abcde"}};
  const ValidationReport report = validate(doc);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].location == "source_tokens");
}

TEST_CASE("validate reports misaligned norm layer") {
  LayeredText doc = three_token_doc();
  doc.norm.items = {"ein", "kleiner"};
  CHECK_FALSE(validate(doc).ok());
}

TEST_CASE("utf8 round trip and rejection") {
  const std::string text = "Grüße ſind ⟨alt⟩";
  CHECK(encode_utf8(decode_utf8(text)) == text);
  CHECK(scalar_count(text) == decode_utf8(text).size());
  std::string bad = "ab\xffzz";
  std::size_t offset = 0;
  CHECK_FALSE(valid_utf8(bad, &offset));
  CHECK(offset == 2);
  CHECK_THROWS_AS(decode_utf8(bad), EncodingError);
  // Overlong encoding and lone continuation bytes are rejected too.
  CHECK_FALSE(valid_utf8(std::string("\xc0\xaf")));
  CHECK_FALSE(valid_utf8(std::string("\x80")));
}
