#include "hype/features.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "hype/error.hpp"
#include "hype/io.hpp"

namespace hype {

std::vector<std::string> unigrams(const Sentence& sentence) {
  std::vector<std::string> out;
  for (const Token& t : sentence.tokens) {
    if (!is_punct_token(t.text)) out.push_back(t.lower);
  }
  return out;
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> terms, std::vector<std::size_t> df,
                                  std::size_t total_documents) {
  if (terms.size() != df.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "vocabulary terms and frequencies differ in length");
  }
  Vocabulary v;
  v.terms_ = std::move(terms);
  v.df_ = std::move(df);
  v.total_documents_ = total_documents;
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    if (!v.index_.emplace(v.terms_[i], i).second) {
      throw Error(ErrorKind::kDuplicateEntry, "vocabulary term '" + v.terms_[i] + "' repeated");
    }
  }
  return v;
}

Vocabulary fit_vocabulary(std::span<const Sentence> train) {
  if (train.empty()) throw Error(ErrorKind::kEmptyTrainingSet, "no training sentences");
  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  std::unordered_map<std::string, std::size_t> index;
  for (const Sentence& s : train) {
    std::set<std::size_t> seen;
    for (auto& w : unigrams(s)) {
      auto [it, inserted] = index.emplace(w, terms.size());
      if (inserted) {
        terms.push_back(w);
        df.push_back(0);
      }
      if (seen.insert(it->second).second) ++df[it->second];
    }
  }
  return Vocabulary::from_parts(std::move(terms), std::move(df), train.size());
}

double FeatureVector::at(std::size_t index) const {
  if (!sparse) return index < values.size() ? values[index] : 0.0;
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::size_t i) { return e.first < i; });
  return it != entries.end() && it->first == index ? it->second : 0.0;
}

std::vector<double> FeatureVector::to_dense() const {
  if (!sparse) return values;
  std::vector<double> out(dimension, 0.0);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

FeatureVector sparse_vector(std::size_t dimension, std::vector<std::pair<std::size_t, double>> entries) {
  std::sort(entries.begin(), entries.end());
  FeatureVector f;
  f.dimension = dimension;
  for (const auto& e : entries) {
    if (e.first >= dimension) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "index " + std::to_string(e.first) + " outside dimension " + std::to_string(dimension));
    }
    if (!f.entries.empty() && f.entries.back().first == e.first) {
      f.entries.back().second += e.second;
    } else {
      f.entries.push_back(e);
    }
  }
  return f;
}

FeatureVector dense_vector(std::vector<double> values) {
  FeatureVector f;
  f.sparse = false;
  f.dimension = values.size();
  f.values = std::move(values);
  return f;
}

FeatureVector bow(const Sentence& sentence, const Vocabulary& vocabulary) {
  std::map<std::size_t, double> counts;
  for (const auto& w : unigrams(sentence)) {
    if (auto i = vocabulary.find(w)) counts[*i] += 1.0;
  }
  FeatureVector f;
  f.dimension = vocabulary.size();
  f.entries.assign(counts.begin(), counts.end());
  return f;
}

EmbeddingTable::EmbeddingTable(std::unordered_map<std::string, std::vector<double>> vectors,
                               std::size_t dimension)
    : vectors_(std::move(vectors)), dimension_(dimension) {
  for (const auto& [word, v] : vectors_) {
    if (v.size() != dimension_) {
      throw Error(ErrorKind::kDimensionMismatch, "vector for '" + word + "' has " +
                                                     std::to_string(v.size()) + " values, expected " +
                                                     std::to_string(dimension_));
    }
  }
}

const std::vector<double>* EmbeddingTable::lookup(std::string_view word) const {
  auto it = vectors_.find(casefold(word));
  if (it == vectors_.end()) it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embeddings(std::string_view content) {
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t dimension = 0;
  std::size_t line_no = 0;
  for (const std::string& line : split_lines(content)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream in(line);
    std::string word;
    in >> word;
    std::vector<double> v;
    for (std::string num; in >> num;) {
      double x = 0;
      const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), x);
      if (ec != std::errc() || ptr != num.data() + num.size()) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad number '" + num + "'");
      }
      v.push_back(x);
    }
    if (v.empty()) {
      throw Error(ErrorKind::kDimensionMismatch, "line " + std::to_string(line_no) + ": no vector values");
    }
    if (dimension == 0) dimension = v.size();
    if (v.size() != dimension) {
      throw Error(ErrorKind::kDimensionMismatch, "line " + std::to_string(line_no) + ": " +
                                                     std::to_string(v.size()) + " values, expected " +
                                                     std::to_string(dimension));
    }
    vectors.emplace(word, std::move(v));  // first occurrence wins
  }
  return EmbeddingTable(std::move(vectors), dimension);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(read_file(path));
}

FeatureVector avg_embedding(const Sentence& sentence, const EmbeddingTable& table) {
  std::vector<double> sum(table.dimension(), 0.0);
  std::size_t known = 0;
  for (const Token& t : sentence.tokens) {
    if (is_punct_token(t.text)) continue;
    if (const auto* v = table.lookup(t.text)) {
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*v)[d];
      ++known;
    }
  }
  if (known > 0) {
    for (double& x : sum) x /= static_cast<double>(known);
  }
  FeatureVector f = dense_vector(std::move(sum));
  f.all_oov = known == 0;
  return f;
}

}  // namespace hype
