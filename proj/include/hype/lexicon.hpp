#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hype/text.hpp"

namespace hype {

enum class Category { kImportance, kNovelty, kRigor, kScale, kUtility, kQuality, kAttitude, kProblem };

const char* category_name(Category category);
std::optional<Category> parse_category(std::string_view name);

struct LexiconEntry {
  std::string adjective;
  Category category = Category::kNovelty;
  bool hyperbolic = false;

  bool operator==(const LexiconEntry&) const = default;
};

// Immutable after construction; entries are kept sorted by adjective so that
// the line order of the source file does not matter.
class Lexicon {
 public:
  Lexicon() = default;
  // Throws Error(kDuplicateEntry) or Error(kParse) on invalid entries.
  explicit Lexicon(std::vector<LexiconEntry> entries);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const LexiconEntry* find(std::string_view adjective) const;
  bool contains(std::string_view adjective) const { return find(adjective) != nullptr; }
  const std::unordered_set<std::string>& adjectives() const { return adjectives_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const Lexicon& other) const { return entries_ == other.entries_; }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_set<std::string> adjectives_;
};

struct RedundancyPair {
  std::string trigger;
  std::string adjective;

  auto operator<=>(const RedundancyPair&) const = default;
};

struct RuleResources {
  std::set<std::string> amplifiers;
  // Multi-word phrases containing a lexicon adjective; a match anywhere
  // around the target means the adjective is used technically or literally.
  std::set<std::string> collocation_blocklist;
  std::set<RedundancyPair> redundancy_pairs;
  std::set<std::string> promotional_context_words;
  // Nouns that make "first" an ordinal ("first aim", "first two weeks").
  std::set<std::string> sequence_nouns;
  // Phrases in which an attributive adjective carries the proposition
  // ("uses a novel approach"); they switch off the attributive removal test.
  std::set<std::string> content_bearing;

  bool operator==(const RuleResources&) const = default;
};

struct LexiconBundle {
  Lexicon lexicon;
  RuleResources resources;
};

Lexicon parse_lexicon(std::string_view content);
RuleResources parse_resources(std::string_view content);
std::string format_lexicon(const Lexicon& lexicon);
std::string format_resources(const RuleResources& resources);

// Phrases in [blocklist] or [content_bearing] containing no lexicon
// adjective. They can never match; "essential fatty" stays inert until the
// importance category is filled in.
std::vector<std::string> inert_phrases(const RuleResources& resources, const Lexicon& lexicon);

// Throws Error(kUnreadableFile), Error(kParse) (message carries the line
// number) or Error(kDuplicateEntry).
LexiconBundle load_lexicon(const std::filesystem::path& lexicon_path,
                           const std::filesystem::path& resources_path);
void save_lexicon(const LexiconBundle& bundle, const std::filesystem::path& lexicon_path,
                  const std::filesystem::path& resources_path);

// Location of the shipped novelty lexicon and rule resources.
std::filesystem::path default_data_dir();
LexiconBundle load_default_lexicon();

struct CandidateOccurrence {
  std::string sentence_id;
  std::string adjective;
  TokenIndex token_index = 0;
  SyntacticContext context;

  bool operator==(const CandidateOccurrence&) const = default;
};

// Tokenize and tag with the lexicon adjectives forced to ADJ.
Sentence prepare_sentence(std::string_view text, const Lexicon& lexicon, std::string id = {});

// One occurrence per token whose lowercase form is a lexicon adjective,
// whatever its tag, in offset order.
std::vector<CandidateOccurrence> find_candidates(const Sentence& sentence, const Lexicon& lexicon);

// Does `phrase` (space separated, lowercase) occur in the sentence covering
// the target token at one of the phrase positions equal to the target word?
bool phrase_covers(const Sentence& sentence, TokenIndex target, std::string_view phrase);

// Inflection-tolerant trigger match ("discover" matches "discovered").
bool matches_trigger(std::string_view word, std::string_view trigger);

}  // namespace hype
