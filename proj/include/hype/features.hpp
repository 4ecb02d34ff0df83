#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hype/text.hpp"

namespace hype {

// Lowercase word tokens of a sentence; punctuation-only tokens are skipped.
std::vector<std::string> unigrams(const Sentence& sentence);

class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::size_t> find(std::string_view term) const;
  std::size_t document_frequency(std::size_t index) const { return df_[index]; }
  const std::vector<std::size_t>& document_frequencies() const { return df_; }
  std::size_t total_documents() const { return total_documents_; }

  // Terms in first-occurrence order with their document frequencies.
  static Vocabulary from_parts(std::vector<std::string> terms, std::vector<std::size_t> df,
                               std::size_t total_documents);

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && df_ == other.df_ && total_documents_ == other.total_documents_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::size_t total_documents_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Throws Error(kEmptyTrainingSet).
Vocabulary fit_vocabulary(std::span<const Sentence> train);

struct FeatureVector {
  std::size_t dimension = 0;
  bool sparse = true;
  // Sparse: (index, value) with strictly increasing indices < dimension.
  std::vector<std::pair<std::size_t, double>> entries;
  // Dense: `dimension` values.
  std::vector<double> values;
  // Dense vector averaged over no known word.
  bool all_oov = false;

  double at(std::size_t index) const;
  std::vector<double> to_dense() const;
  bool operator==(const FeatureVector&) const = default;
};

FeatureVector sparse_vector(std::size_t dimension, std::vector<std::pair<std::size_t, double>> entries);
FeatureVector dense_vector(std::vector<double> values);

// Unigram counts; out-of-vocabulary words are dropped.
FeatureVector bow(const Sentence& sentence, const Vocabulary& vocabulary);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // Throws Error(kDimensionMismatch) when vector sizes differ.
  EmbeddingTable(std::unordered_map<std::string, std::vector<double>> vectors, std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  // Casefolded form first, then the word as written.
  const std::vector<double>* lookup(std::string_view word) const;

 private:
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t dimension_ = 0;
};

// Plain-text word vectors: "word v1 ... vD" per line, no header. Throws
// Error(kDimensionMismatch) naming the line, Error(kParse) for non-numeric
// values, Error(kUnreadableFile).
EmbeddingTable parse_embeddings(std::string_view content);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Mean of the vectors of in-table tokens (punctuation skipped); zero vector
// with all_oov set when none is known.
FeatureVector avg_embedding(const Sentence& sentence, const EmbeddingTable& table);

}  // namespace hype
