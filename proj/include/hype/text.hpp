#pragma once

// Tokenization, coarse part-of-speech tagging and the shallow phrase context
// the guideline rules consume. Offsets are byte offsets into the UTF-8
// sentence text.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hype {

enum class Tag { kAdj, kAdv, kNoun, kVerb, kCopula, kDet, kConj, kPunct, kNum, kOther };

const char* tag_name(Tag tag);
// Accepts the names produced by tag_name ("ADJ", "NOUN", ...).
std::optional<Tag> parse_tag(std::string_view name);

struct Token {
  std::string text;
  std::string lower;
  std::size_t start = 0;
  std::size_t end = 0;
  Tag tag = Tag::kOther;
  bool sentence_initial = false;

  bool operator==(const Token&) const = default;
};

struct SourceRef {
  std::string doc_id;
  int year = 0;

  bool operator==(const SourceRef&) const = default;
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::optional<SourceRef> source;

  bool operator==(const Sentence&) const = default;
};

using TokenIndex = std::size_t;

enum class Position { kAttributive, kPredicative, kUnknown };

const char* position_name(Position position);

struct SyntacticContext {
  Position position = Position::kUnknown;
  std::vector<TokenIndex> premodifiers;  // ADV run directly before the target
  std::optional<TokenIndex> head_noun;
  std::vector<TokenIndex> coordinated_adjectives;
  bool in_proper_noun = false;
  bool justification_clause = false;

  bool operator==(const SyntacticContext&) const = default;
};

// Simple Unicode lowercase (ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic).
std::string casefold(std::string_view text);

// Splits on whitespace and punctuation. Hyphenated words, internal
// apostrophes and decimal numbers stay single tokens. Tags are left as OTHER.
Sentence tokenize(std::string_view text);

// Coarse tagger driven by closed-class tables, suffix heuristics and a
// small amount of left context. `forced_adjectives` (lowercase) are always
// tagged ADJ; the hype lexicon is passed here.
Sentence tag(const Sentence& sentence,
             const std::unordered_set<std::string>& forced_adjectives = {});

// Throws Error(kTargetNotAdjective) when the target is not tagged ADJ.
SyntacticContext analyze_context(const Sentence& sentence, TokenIndex target);

// Byte ranges [first, second) of sentences in `text`, trimmed of surrounding
// whitespace. Abbreviations such as "e.g." and "Inc." do not end a sentence.
std::vector<std::pair<std::size_t, std::size_t>> segment_sentences(std::string_view text);

// Collapses every whitespace run to one ASCII space and trims both ends.
std::string normalize_whitespace(std::string_view text);

bool is_capitalized(const Token& token);
bool is_punct_token(std::string_view text);

}  // namespace hype
