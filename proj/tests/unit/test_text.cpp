#include <random>
#include <sstream>

#include "doctest.h"
#include "hype/error.hpp"
#include "hype/io.hpp"
#include "hype/lexicon.hpp"
#include "hype/text.hpp"
#include "support/fs.hpp"

using namespace hype;

namespace {

struct GoldToken {
  std::string text;
  Tag tag;
};

std::vector<std::vector<GoldToken>> load_gold_tags() {
  std::vector<std::vector<GoldToken>> out(1);
  for (const auto& line : split_lines(read_file(testing::data_path("tagger_golden.tsv")))) {
    if (line.empty()) {
      if (!out.back().empty()) out.emplace_back();
      continue;
    }
    const auto fields = split(line, '\t');
    REQUIRE(fields.size() == 2);
    auto t = parse_tag(fields[1]);
    REQUIRE(t.has_value());
    out.back().push_back({fields[0], *t});
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

std::vector<std::string> fixture_sentences() {
  return split_lines(read_file(testing::data_path("tagger_fixture.txt")));
}

const LexiconBundle& bundle() {
  static const LexiconBundle b = load_default_lexicon();
  return b;
}

Sentence prep(std::string_view text) { return prepare_sentence(text, bundle().lexicon); }

TokenIndex index_of(const Sentence& s, std::string_view word, int nth = 0) {
  for (TokenIndex i = 0; i < s.tokens.size(); ++i) {
    if (s.tokens[i].lower == word && nth-- == 0) return i;
  }
  FAIL("token not found: " << word);
  return 0;
}

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "novel", "high-impact", "Inc.", "e.g.", "3.5", "don't", " ", "  ", "\t", ",", ";", "(",
      ")", "é", "naïve", "Über", "—", "?", "!", "-", "x", "Aim", "2", "’s", "...", "a-b-c", "\"",
      "state-of-the-art", "\xff", "\xe2\x80"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 25);
  std::string s;
  for (int n = len(rng); n > 0; --n) {
    s += pieces[pick(rng)];
    if (rng() % 2) s += ' ';
  }
  return s;
}

}  // namespace

TEST_CASE("tokenize offsets for a simple sentence") {
  Sentence s = tokenize("We developed innovative technologies.");
  REQUIRE(s.tokens.size() == 5);
  const std::pair<std::size_t, std::size_t> expected[] = {{0, 2}, {3, 12}, {13, 23}, {24, 36}, {36, 37}};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.tokens[i].start == expected[i].first);
    CHECK(s.tokens[i].end == expected[i].second);
  }
  CHECK(s.tokens[0].sentence_initial);
  CHECK_FALSE(s.tokens[1].sentence_initial);
}

TEST_CASE("tokenize empty and whitespace-only text") {
  CHECK(tokenize("").tokens.empty());
  CHECK(tokenize("  \t\n").tokens.empty());
}

TEST_CASE("hyphenated words stay whole") {
  Sentence s = tokenize("high-impact study");
  REQUIRE(s.tokens.size() == 2);
  CHECK(s.tokens[0].text == "high-impact");
  CHECK(s.tokens[1].text == "study");
}

TEST_CASE("hand tokenization and tagging of the fixture") {
  const auto sentences = fixture_sentences();
  const auto gold = load_gold_tags();
  REQUIRE(sentences.size() == 20);
  REQUIRE(gold.size() == 20);
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const Sentence s = prep(sentences[i]);
    REQUIRE(s.tokens.size() == gold[i].size());
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      CHECK(s.tokens[k].text == gold[i][k].text);
      ++total;
      if (s.tokens[k].tag == gold[i][k].tag) {
        ++agree;
      } else {
        MESSAGE("sentence " << i + 1 << " '" << s.tokens[k].text << "': got "
                            << std::string(tag_name(s.tokens[k].tag)) << ", gold "
                            << std::string(tag_name(gold[i][k].tag)));
      }
    }
  }
  const double rate = static_cast<double>(agree) / static_cast<double>(total);
  MESSAGE("tag agreement " << agree << "/" << total);
  CHECK(rate >= 0.90);
}

TEST_CASE("closed-class tags") {
  Sentence a = prep("truly novel");
  CHECK(a.tokens[0].tag == Tag::kAdv);
  CHECK(a.tokens[1].tag == Tag::kAdj);
  Sentence b = prep("The study is innovative");
  CHECK(b.tokens[2].tag == Tag::kCopula);
  CHECK(b.tokens[3].tag == Tag::kAdj);
}

TEST_CASE("offset round-trip on random text") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 2000; ++n) {
    const std::string text = random_text(rng);
    const Sentence s = tokenize(text);
    std::size_t last_end = 0;
    for (const auto& t : s.tokens) {
      REQUIRE(t.start < t.end);
      REQUIRE(t.start >= last_end);
      REQUIRE(t.end <= text.size());
      REQUIRE(text.substr(t.start, t.end - t.start) == t.text);
      last_end = t.end;
    }
    // Everything not covered by a token is whitespace.
    std::string uncovered;
    std::size_t pos = 0;
    for (const auto& t : s.tokens) {
      uncovered += text.substr(pos, t.start - pos);
      pos = t.end;
    }
    uncovered += text.substr(pos);
    CHECK(normalize_whitespace(uncovered).empty());
  }
}

TEST_CASE("tokenize and tag are deterministic") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const std::string text = random_text(rng);
    CHECK(prep(text) == prep(text));
  }
}

TEST_CASE("attributive position with head noun") {
  Sentence s = prep("we developed innovative technologies");
  auto ctx = analyze_context(s, 2);
  CHECK(ctx.position == Position::kAttributive);
  REQUIRE(ctx.head_noun.has_value());
  CHECK(s.tokens[*ctx.head_noun].text == "technologies");
}

TEST_CASE("predicative position with justification clause") {
  Sentence s = prep("the study is innovative because no previous research has identified it");
  auto ctx = analyze_context(s, index_of(s, "innovative"));
  CHECK(ctx.position == Position::kPredicative);
  CHECK(ctx.justification_clause);
  CHECK_FALSE(ctx.head_noun.has_value());
}

TEST_CASE("justification via 'as' requires a clause") {
  Sentence clause = prep("the design is unique as it combines two cohorts");
  CHECK(analyze_context(clause, index_of(clause, "unique")).justification_clause);
  Sentence such = prep("the design is unique in settings such as rural clinics");
  CHECK_FALSE(analyze_context(such, index_of(such, "unique")).justification_clause);
}

TEST_CASE("coordination") {
  Sentence s = prep("an innovative and creative leader");
  auto ctx = analyze_context(s, index_of(s, "innovative"));
  REQUIRE(ctx.coordinated_adjectives.size() == 1);
  CHECK(s.tokens[ctx.coordinated_adjectives[0]].text == "creative");
  auto back = analyze_context(s, index_of(s, "creative"));
  REQUIRE(back.coordinated_adjectives.size() == 1);
  CHECK(s.tokens[back.coordinated_adjectives[0]].text == "innovative");
}

TEST_CASE("premodifier run") {
  Sentence s = prep("a truly highly novel method");
  auto ctx = analyze_context(s, index_of(s, "novel"));
  CHECK(ctx.premodifiers == std::vector<TokenIndex>{1, 2});
}

TEST_CASE("proper noun membership") {
  Sentence s = prep("Creative Scientist, Inc. (CSI) will develop the software.");
  CHECK(analyze_context(s, 0).in_proper_noun);
  Sentence mid = prep("Funding came from the Novel Therapeutics Program.");
  CHECK(analyze_context(mid, index_of(mid, "novel")).in_proper_noun);
  Sentence plain = prep("Creative approaches are needed.");
  CHECK_FALSE(analyze_context(plain, 0).in_proper_noun);
}

TEST_CASE("analyze_context rejects non-adjective targets") {
  Sentence s = prep("we developed innovative technologies");
  try {
    analyze_context(s, 0);
    FAIL("expected TargetNotAdjective");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTargetNotAdjective);
  }
}

TEST_CASE("context invariants on random sentences") {
  static const std::vector<std::string> words = {
      "novel", "innovative", "creative", "unique", "and", "or", ",", "truly", "is", "are",
      "the", "a", "study", "method", "because", "as", "it", "uses", "new", "very", ".",
      "Center", "first", "latest", "outstanding", "emerging", "data", "remains"};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> len(1, 14);
  for (int n = 0; n < 3000; ++n) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += words[pick(rng)] + " ";
    const Sentence s = prep(text);
    for (TokenIndex i = 0; i < s.tokens.size(); ++i) {
      if (s.tokens[i].tag != Tag::kAdj) continue;
      const auto ctx = analyze_context(s, i);
      if (ctx.position == Position::kAttributive) REQUIRE(ctx.head_noun.has_value());
      if (ctx.position == Position::kPredicative) {
        bool copula = false;
        for (TokenIndex k = i >= 3 ? i - 3 : 0; k < i; ++k) copula |= s.tokens[k].tag == Tag::kCopula;
        REQUIRE(copula);
      }
      for (TokenIndex c : ctx.coordinated_adjectives) {
        REQUIRE(c != i);
        if (!bundle().lexicon.contains(s.tokens[c].lower)) continue;
        const auto other = analyze_context(s, c);
        INFO(text);
        CHECK(std::find(other.coordinated_adjectives.begin(), other.coordinated_adjectives.end(),
                        i) != other.coordinated_adjectives.end());
      }
    }
  }
}

TEST_CASE("sentence segmentation") {
  const std::string text =
      "We study mice, e.g. knockouts.  Creative Scientist, Inc. builds tools! Is it novel? "
      "Yes";
  const auto ranges = segment_sentences(text);
  REQUIRE(ranges.size() == 4);
  CHECK(text.substr(ranges[0].first, ranges[0].second - ranges[0].first) ==
        "We study mice, e.g. knockouts.");
  CHECK(text.substr(ranges[1].first, ranges[1].second - ranges[1].first) ==
        "Creative Scientist, Inc. builds tools!");
  CHECK(text.substr(ranges[3].first, ranges[3].second - ranges[3].first) == "Yes");
  CHECK(segment_sentences("").empty());
  CHECK(segment_sentences("   ").empty());
}

TEST_CASE("casefold") {
  CHECK(casefold("NoVeL") == "novel");
  CHECK(casefold("Über") == "über");
  CHECK(casefold("ΑΒΓ") == "αβγ");
}
