#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "hype/error.hpp"
#include "hype/io.hpp"
#include "hype/lexicon.hpp"
#include "support/fs.hpp"

using namespace hype;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kInvalidArgument;
}

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '-' || c == '\'' || u >= 0x80;
}

// Counts of lowercase lexicon adjectives as whole words, by plain scanning.
std::map<std::string, int> scan_counts(const std::string& text, const Lexicon& lexicon) {
  std::map<std::string, int> counts;
  const std::string low = casefold(text);
  for (const auto& e : lexicon.entries()) {
    for (std::size_t pos = low.find(e.adjective); pos != std::string::npos;
         pos = low.find(e.adjective, pos + 1)) {
      const bool left_ok = pos == 0 || !is_word_byte(low[pos - 1]);
      const std::size_t end = pos + e.adjective.size();
      const bool right_ok = end == low.size() || !is_word_byte(low[end]);
      if (left_ok && right_ok) ++counts[e.adjective];
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("default lexicon contents") {
  const auto b = load_default_lexicon();
  CHECK(b.lexicon.size() == 11);
  std::vector<std::string> hyperbolic;
  for (const auto& e : b.lexicon.entries()) {
    CHECK(e.category == Category::kNovelty);
    if (e.hyperbolic) hyperbolic.push_back(e.adjective);
  }
  CHECK(hyperbolic == std::vector<std::string>{"groundbreaking", "revolutionary", "unparalleled",
                                               "unprecedented"});
  for (const char* w : {"creative", "emerging", "first", "groundbreaking", "innovative", "latest",
                        "novel", "revolutionary", "unique", "unparalleled", "unprecedented"}) {
    CHECK(b.lexicon.contains(w));
  }
  for (const char* a : {"truly", "highly", "completely", "extremely", "exceptionally", "remarkably",
                        "very"}) {
    CHECK(b.resources.amplifiers.count(a));
  }
  for (const char* p : {"first aim", "first step", "first time", "first weeks", "essential fatty"}) {
    CHECK(b.resources.collocation_blocklist.count(p));
  }
  CHECK(b.resources.redundancy_pairs.count({"discover", "novel"}));
  CHECK(b.resources.redundancy_pairs.count({"new", "novel"}));
  for (const char* n : {"aim", "step", "phase", "year", "week", "time", "trimester"}) {
    CHECK(b.resources.sequence_nouns.count(n));
  }
  CHECK(inert_phrases(b.resources, b.lexicon) == std::vector<std::string>{"essential fatty"});
}

TEST_CASE("duplicate adjective") {
  CHECK(kind_of([] { parse_lexicon("novel\tnovelty\t0\nnovel\tnovelty\t1\n"); }) ==
        ErrorKind::kDuplicateEntry);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_lexicon("# header\nnovel\tnovelty\t0\nunique\tweird\t0\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(kind_of([] { parse_lexicon("Novel\tnovelty\t0\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_lexicon("novel\tnovelty\t2\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_lexicon("novel novelty 0\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_resources("truly\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_resources("[bogus]\nx\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_resources("[redundancy]\nnew novel\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { parse_resources("[amplifiers]\nTruly\n"); }) == ErrorKind::kParse);
}

TEST_CASE("missing file") {
  CHECK(kind_of([] { load_lexicon("/nonexistent/lex.tsv", "/nonexistent/res.txt"); }) ==
        ErrorKind::kUnreadableFile);
}

TEST_CASE("save and load round-trip") {
  const auto b = load_default_lexicon();
  testing::TempDir dir;
  save_lexicon(b, dir / "lex.tsv", dir / "res.txt");
  const auto again = load_lexicon(dir / "lex.tsv", dir / "res.txt");
  CHECK(again.lexicon == b.lexicon);
  CHECK(again.resources == b.resources);
  save_lexicon(again, dir / "lex2.tsv", dir / "res2.txt");
  CHECK(read_file(dir / "lex.tsv") == read_file(dir / "lex2.tsv"));
  CHECK(read_file(dir / "res.txt") == read_file(dir / "res2.txt"));
}

TEST_CASE("load is independent of line order") {
  const auto lines = split_lines(read_file(default_data_dir() / "novelty.tsv"));
  std::vector<std::string> entries;
  for (const auto& l : lines) {
    if (!l.empty() && l[0] != '#') entries.push_back(l);
  }
  const Lexicon reference = parse_lexicon(join(entries, "\n"));
  std::mt19937_64 rng(1);
  for (int n = 0; n < 20; ++n) {
    std::shuffle(entries.begin(), entries.end(), rng);
    CHECK(parse_lexicon(join(entries, "\n")) == reference);
  }
}

TEST_CASE("find_candidates basics") {
  const auto b = load_default_lexicon();
  Sentence s = prepare_sentence("This novel approach uses a novel gene", b.lexicon, "s1");
  auto occ = find_candidates(s, b.lexicon);
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].adjective == "novel");
  CHECK(occ[0].token_index < occ[1].token_index);
  CHECK(occ[0].sentence_id == "s1");

  Sentence csi = prepare_sentence("Creative Scientist, Inc. (CSI)", b.lexicon);
  auto c = find_candidates(csi, b.lexicon);
  REQUIRE(c.size() == 1);
  CHECK(c[0].context.in_proper_noun);

  CHECK(find_candidates(prepare_sentence("We measured blood pressure.", b.lexicon), b.lexicon)
            .empty());
}

TEST_CASE("find_candidates surfaces externally mistagged tokens") {
  const auto b = load_default_lexicon();
  Sentence s = prepare_sentence("a novel gene", b.lexicon);
  s.tokens[1].tag = Tag::kNoun;
  auto occ = find_candidates(s, b.lexicon);
  REQUIRE(occ.size() == 1);
  CHECK(occ[0].context.position == Position::kAttributive);
}

TEST_CASE("find_candidates equals a brute-force scan") {
  const auto b = load_default_lexicon();
  static const std::vector<std::string> words = {
      "novel",  "Novel", "NOVEL", "unique", "uniquely", "first-in-class", "first", "firstly",
      "latest", "the",   "innovative", "innovatively", "creative,", "(emerging)", "novelty",
      "unprecedented.", "groundbreaking", "revolutionary!", "unparalleled", "study", "non-novel",
      "novel's", "x"};
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int n = 0; n < 1000; ++n) {
    std::string text;
    for (int k = static_cast<int>(rng() % 15); k > 0; --k) text += words[pick(rng)] + " ";
    const Sentence s = prepare_sentence(text, b.lexicon);
    std::map<std::string, int> found;
    for (const auto& occ : find_candidates(s, b.lexicon)) {
      REQUIRE(s.tokens[occ.token_index].lower == occ.adjective);
      ++found[occ.adjective];
    }
    INFO(text);
    CHECK(found == scan_counts(text, b.lexicon));
  }
}

TEST_CASE("phrase_covers") {
  const auto b = load_default_lexicon();
  Sentence s = prepare_sentence("critical and creative independent thinking", b.lexicon);
  CHECK(phrase_covers(s, 2, "creative independent thinking"));
  CHECK_FALSE(phrase_covers(s, 2, "creative thinking"));
  CHECK_FALSE(phrase_covers(s, 0, "creative independent thinking"));
  Sentence edge = prepare_sentence("first", b.lexicon);
  CHECK_FALSE(phrase_covers(edge, 0, "first aim"));
}

TEST_CASE("trigger inflections") {
  CHECK(matches_trigger("discovered", "discover"));
  CHECK(matches_trigger("discovery", "discover"));
  CHECK(matches_trigger("discoveries", "discover"));
  CHECK(matches_trigger("new", "new"));
  CHECK(matches_trigger("emerged", "emerge"));
  CHECK(matches_trigger("emerging", "emerge"));
  CHECK(matches_trigger("studies", "study"));
  CHECK_FALSE(matches_trigger("newborn", "new"));
  CHECK_FALSE(matches_trigger("news", "newt"));
  CHECK_FALSE(matches_trigger("dis", "discover"));
}
