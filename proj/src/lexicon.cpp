#include "hype/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hype/error.hpp"
#include "hype/io.hpp"

#ifndef HYPE_DATA_DIR
#define HYPE_DATA_DIR "data"
#endif

namespace hype {
namespace {

bool is_lowercase_word(std::string_view s) { return !s.empty() && casefold(s) == s; }

std::string parse_error_at(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::vector<std::string> split_words(std::string_view phrase) {
  std::vector<std::string> out;
  std::istringstream in{std::string(phrase)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

const char* category_name(Category category) {
  switch (category) {
    case Category::kImportance: return "importance";
    case Category::kNovelty: return "novelty";
    case Category::kRigor: return "rigor";
    case Category::kScale: return "scale";
    case Category::kUtility: return "utility";
    case Category::kQuality: return "quality";
    case Category::kAttitude: return "attitude";
    case Category::kProblem: return "problem";
  }
  return "novelty";
}

std::optional<Category> parse_category(std::string_view name) {
  for (Category c : {Category::kImportance, Category::kNovelty, Category::kRigor, Category::kScale,
                     Category::kUtility, Category::kQuality, Category::kAttitude,
                     Category::kProblem}) {
    if (name == category_name(c)) return c;
  }
  return std::nullopt;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) { return a.adjective < b.adjective; });
  for (const auto& e : entries_) {
    if (!is_lowercase_word(e.adjective)) {
      throw Error(ErrorKind::kParse, "adjective must be non-empty lowercase: '" + e.adjective + "'");
    }
    if (!adjectives_.insert(e.adjective).second) {
      throw Error(ErrorKind::kDuplicateEntry, "adjective '" + e.adjective + "' listed twice");
    }
  }
}

const LexiconEntry* Lexicon::find(std::string_view adjective) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), adjective,
                             [](const LexiconEntry& e, std::string_view a) { return e.adjective < a; });
  if (it == entries_.end() || it->adjective != adjective) return nullptr;
  return &*it;
}

Lexicon parse_lexicon(std::string_view content) {
  std::vector<LexiconEntry> entries;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(content)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorKind::kParse, parse_error_at(line_no, "expected 3 tab-separated fields"));
    }
    LexiconEntry entry;
    entry.adjective = trim(fields[0]);
    if (!is_lowercase_word(entry.adjective)) {
      throw Error(ErrorKind::kParse, parse_error_at(line_no, "adjective must be lowercase"));
    }
    auto category = parse_category(trim(fields[1]));
    if (!category) {
      throw Error(ErrorKind::kParse, parse_error_at(line_no, "unknown category '" + fields[1] + "'"));
    }
    entry.category = *category;
    const std::string flag = trim(fields[2]);
    if (flag != "0" && flag != "1") {
      throw Error(ErrorKind::kParse, parse_error_at(line_no, "hyperbolic flag must be 0 or 1"));
    }
    entry.hyperbolic = flag == "1";
    if (!seen.insert(entry.adjective).second) {
      throw Error(ErrorKind::kDuplicateEntry,
                  parse_error_at(line_no, "adjective '" + entry.adjective + "' listed twice"));
    }
    entries.push_back(std::move(entry));
  }
  return Lexicon(std::move(entries));
}

RuleResources parse_resources(std::string_view content) {
  RuleResources res;
  std::string section;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(content)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      static const std::set<std::string> kSections = {"amplifiers",    "blocklist",
                                                      "redundancy",    "context_words",
                                                      "sequence_nouns", "content_bearing"};
      if (!kSections.count(section)) {
        throw Error(ErrorKind::kParse, parse_error_at(line_no, "unknown section [" + section + "]"));
      }
      continue;
    }
    if (section.empty()) {
      throw Error(ErrorKind::kParse, parse_error_at(line_no, "entry before any section header"));
    }
    if (casefold(line) != line) {
      throw Error(ErrorKind::kParse, parse_error_at(line_no, "entries must be lowercase"));
    }
    if (section == "redundancy") {
      const auto fields = split(line, '\t');
      if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
        throw Error(ErrorKind::kParse, parse_error_at(line_no, "expected trigger<TAB>adjective"));
      }
      res.redundancy_pairs.insert({trim(fields[0]), trim(fields[1])});
      continue;
    }
    std::string normalized;
    for (const auto& w : split_words(line)) {
      if (!normalized.empty()) normalized += ' ';
      normalized += w;
    }
    if (section == "amplifiers") res.amplifiers.insert(normalized);
    else if (section == "blocklist") res.collocation_blocklist.insert(normalized);
    else if (section == "context_words") res.promotional_context_words.insert(normalized);
    else if (section == "sequence_nouns") res.sequence_nouns.insert(normalized);
    else res.content_bearing.insert(normalized);
  }
  return res;
}

std::string format_lexicon(const Lexicon& lexicon) {
  std::ostringstream out;
  out << "# adjective\tcategory\thyperbolic\n";
  for (const auto& e : lexicon.entries()) {
    out << e.adjective << '\t' << category_name(e.category) << '\t' << (e.hyperbolic ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string format_resources(const RuleResources& res) {
  std::ostringstream out;
  auto section = [&](const char* name, const std::set<std::string>& items) {
    out << '[' << name << "]\n";
    for (const auto& item : items) out << item << '\n';
    out << '\n';
  };
  section("amplifiers", res.amplifiers);
  section("blocklist", res.collocation_blocklist);
  out << "[redundancy]\n";
  for (const auto& p : res.redundancy_pairs) out << p.trigger << '\t' << p.adjective << '\n';
  out << '\n';
  section("context_words", res.promotional_context_words);
  section("sequence_nouns", res.sequence_nouns);
  section("content_bearing", res.content_bearing);
  return out.str();
}

std::vector<std::string> inert_phrases(const RuleResources& resources, const Lexicon& lexicon) {
  std::vector<std::string> out;
  for (const auto* phrases : {&resources.collocation_blocklist, &resources.content_bearing}) {
    for (const auto& phrase : *phrases) {
      const auto words = split_words(phrase);
      if (std::none_of(words.begin(), words.end(),
                       [&](const std::string& w) { return lexicon.contains(w); })) {
        out.push_back(phrase);
      }
    }
  }
  return out;
}

LexiconBundle load_lexicon(const std::filesystem::path& lexicon_path,
                           const std::filesystem::path& resources_path) {
  LexiconBundle bundle;
  bundle.lexicon = parse_lexicon(read_file(lexicon_path));
  bundle.resources = parse_resources(read_file(resources_path));
  return bundle;
}

void save_lexicon(const LexiconBundle& bundle, const std::filesystem::path& lexicon_path,
                  const std::filesystem::path& resources_path) {
  write_file(lexicon_path, format_lexicon(bundle.lexicon));
  write_file(resources_path, format_resources(bundle.resources));
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("HYPE_DATA_DIR"); env && *env) return env;
  return HYPE_DATA_DIR;
}

LexiconBundle load_default_lexicon() {
  const auto dir = default_data_dir();
  return load_lexicon(dir / "novelty.tsv", dir / "resources.txt");
}

Sentence prepare_sentence(std::string_view text, const Lexicon& lexicon, std::string id) {
  Sentence s = tag(tokenize(text), lexicon.adjectives());
  s.id = std::move(id);
  return s;
}

std::vector<CandidateOccurrence> find_candidates(const Sentence& sentence, const Lexicon& lexicon) {
  std::vector<CandidateOccurrence> out;
  for (TokenIndex i = 0; i < sentence.tokens.size(); ++i) {
    const Token& token = sentence.tokens[i];
    if (!lexicon.contains(token.lower)) continue;
    CandidateOccurrence occ;
    occ.sentence_id = sentence.id;
    occ.adjective = token.lower;
    occ.token_index = i;
    if (token.tag == Tag::kAdj) {
      occ.context = analyze_context(sentence, i);
    } else {
      // Externally tagged input may disagree; analyse as if it were ADJ.
      Sentence forced = sentence;
      forced.tokens[i].tag = Tag::kAdj;
      occ.context = analyze_context(forced, i);
    }
    out.push_back(std::move(occ));
  }
  return out;
}

bool phrase_covers(const Sentence& sentence, TokenIndex target, std::string_view phrase) {
  const auto words = split_words(phrase);
  const auto& toks = sentence.tokens;
  for (std::size_t pos = 0; pos < words.size(); ++pos) {
    if (words[pos] != toks[target].lower) continue;
    if (target < pos || target - pos + words.size() > toks.size()) continue;
    const std::size_t begin = target - pos;
    bool all = true;
    for (std::size_t k = 0; k < words.size() && all; ++k) {
      all = toks[begin + k].lower == words[k];
    }
    if (all) return true;
  }
  return false;
}

bool matches_trigger(std::string_view word, std::string_view trigger) {
  if (word == trigger) return true;
  if (word.size() <= trigger.size() || word.substr(0, trigger.size()) != trigger) {
    // "discovery" from "discover" is covered below; "studies" from "study":
    if (!trigger.empty() && trigger.back() == 'y' && word.size() > 1 &&
        word.substr(0, trigger.size() - 1) == trigger.substr(0, trigger.size() - 1)) {
      const auto rest = word.substr(trigger.size() - 1);
      return rest == "ies" || rest == "ied";
    }
    if (!trigger.empty() && trigger.back() == 'e' &&
        word.substr(0, trigger.size() - 1) == trigger.substr(0, trigger.size() - 1)) {
      const auto rest = word.substr(trigger.size() - 1);
      return rest == "ing";
    }
    return false;
  }
  static const std::set<std::string_view> kSuffixes = {"s", "es", "ed", "d", "ing", "y", "ies", "er", "ers", "eries", "ery"};
  return kSuffixes.count(word.substr(trigger.size())) > 0;
}

}  // namespace hype
