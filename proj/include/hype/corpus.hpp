#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hype/labels.hpp"
#include "hype/lexicon.hpp"
#include "hype/text.hpp"

namespace hype {

struct Document {
  std::string doc_id;
  int year = 0;
  std::string text;  // whitespace-normalized
  // Pre-tagged documents carry their sentences; `tag` is not applied to them.
  std::vector<Sentence> tagged_sentences;
};

struct IndexEntry {
  std::string doc_id;
  std::string sentence_id;
  TokenIndex token_index = 0;

  bool operator==(const IndexEntry&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  // Segments, tokenizes, tags (unless pre-tagged) and indexes the documents.
  // Throws Error(kMalformedDocument) on duplicate ids or '|' in text.
  Corpus(std::vector<Document> documents, const Lexicon& lexicon);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::map<std::string, std::vector<IndexEntry>>& index() const { return index_; }
  const Sentence* find_sentence(std::string_view sentence_id) const;
  std::size_t occurrences(std::string_view adjective) const;

 private:
  std::vector<Document> documents_;
  std::vector<Sentence> sentences_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::vector<IndexEntry>> index_;
};

// Parses one file: either a single document whose first line is
// "#id<TAB>year" or several such documents separated by "---" lines. A third
// header field "tagged" marks a body of token<TAB>TAG lines with blank lines
// between sentences. Throws Error(kMalformedDocument).
std::vector<Document> parse_documents(std::string_view content, std::string_view origin = "input");

// Each path is a file or a directory of files (hidden files skipped, names
// sorted). Throws Error(kMalformedDocument) or Error(kUnreadableFile).
Corpus ingest(const std::vector<std::filesystem::path>& paths, const Lexicon& lexicon);

struct KwicLine {
  std::string sentence_id;
  std::string left;
  std::string keyword;
  std::string right;
};

// Concordance of one adjective, `width` bytes of context per side cut back
// to a UTF-8 character boundary.
std::vector<KwicLine> kwic(const Corpus& corpus, std::string_view adjective, std::size_t width = 40);

enum class Status { kGold, kDisputed, kDiscarded };

const char* status_name(Status status);
std::optional<Status> parse_status(std::string_view name);

struct LabeledExample {
  Sentence sentence;
  std::string adjective;
  TokenIndex token_index = 0;
  std::optional<Label> label;
  RationaleSet rationales;
  std::vector<std::string> annotators;
  Status status = Status::kDisputed;

  // "<sentence_id>@<token_index>", unique within a dataset.
  std::string id() const;
  const Token& target() const { return sentence.tokens.at(token_index); }

  bool operator==(const LabeledExample&) const = default;
};

struct LabeledDataset {
  std::vector<LabeledExample> examples;
  std::uint64_t split_seed = 0;
  // Lines after the header starting with '#', kept verbatim (without '#').
  std::vector<std::string> comments;

  const LabeledExample* find(std::string_view example_id) const;
  bool operator==(const LabeledDataset&) const = default;
};

// Dataset file: "#hype-dataset<TAB>v1<TAB>split_seed=N", optional '#'
// comment lines, then one record per line:
//   sentence_id|doc_id|year|text|adjective|char_start|char_end|label|rationales|status|annotators
// Empty values are written as '-'. Offsets are byte offsets of the target
// token within `text`. Throws Error(kParse) with the line number.
LabeledDataset parse_dataset(std::string_view content, const Lexicon& lexicon);
std::string format_dataset(const LabeledDataset& dataset);
LabeledDataset load_dataset(const std::filesystem::path& path, const Lexicon& lexicon);
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path);

std::string dataset_fingerprint(const LabeledDataset& dataset);

// Uniform sample without replacement of up to `per_adjective` occurrences of
// every lexicon adjective. Examples are unlabeled and DISPUTED, ordered by
// adjective then corpus position.
LabeledDataset sample(const Corpus& corpus, const Lexicon& lexicon, std::size_t per_adjective,
                      std::uint64_t seed);

struct Split {
  std::vector<LabeledExample> development;
  std::vector<LabeledExample> test;
};

// Stratified by label. `ratio` is the development share (0.8 for 8:2).
// DISCARDED examples are dropped; any other non-GOLD example is an
// Error(kInvalidArgument). Both parts keep dataset order.
Split split(const LabeledDataset& dataset, double ratio, std::uint64_t seed);

// Test-part size per class for `n` examples: ceil of the test share overall,
// apportioned by largest remainder (ties to HYPE).
std::map<Label, std::size_t> test_allocation(const std::map<Label, std::size_t>& counts,
                                             double ratio);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified k folds over the labels. Throws Error(kInsufficientClass) when a
// class has fewer than k examples.
std::vector<Fold> stratified_kfold(const std::vector<Label>& labels, std::size_t k,
                                   std::uint64_t seed);
std::vector<Fold> stratified_kfold(const std::vector<LabeledExample>& examples, std::size_t k,
                                   std::uint64_t seed);

std::vector<Label> labels_of(const std::vector<LabeledExample>& examples);

}  // namespace hype
