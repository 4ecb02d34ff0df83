#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hype/eval.hpp"
#include "hype/features.hpp"
#include "hype/labels.hpp"

namespace hype {

enum class ClassifierKind { kMajority, kMnb, kMvb, kLsa1nn, kSvm };

// "MAJORITY", "MNB", "MVB", "LSA_1NN", "SVM_LINEAR".
const char* classifier_name(ClassifierKind kind);
std::optional<ClassifierKind> parse_classifier(std::string_view name);

enum class FeatureKind { kBow, kEmbedding };

const char* feature_name(FeatureKind kind);  // "bow", "embedding"
std::optional<FeatureKind> parse_feature(std::string_view name);

struct Hyperparams {
  double alpha = 1.0;     // NB additive smoothing, > 0
  double c = 1.0;         // SVM regularization, lambda = 1 / (C n)
  int epochs = 30;        // SVM passes over the data
  std::uint64_t seed = 0;  // SVM example order
  std::size_t rank = 100;  // LSA rank, clipped to the matrix rank bound

  bool operator==(const Hyperparams&) const = default;
};

// Only the fields the kind uses, e.g. "alpha=0.5" or "C=1,epochs=30,seed=0".
std::string describe(ClassifierKind kind, const Hyperparams& hp);

struct Model {
  int format_version = 1;
  ClassifierKind kind = ClassifierKind::kMajority;
  Hyperparams hyperparams;
  std::size_t dimension = 0;

  // Feature pipeline; empty vocabulary for embedding models.
  FeatureKind feature_kind = FeatureKind::kBow;
  Vocabulary vocabulary;
  std::string embedding_ref;

  // MAJORITY
  Label majority = Label::kHype;
  // MNB and MVB, index 0 = HYPE, 1 = NOT_HYPE.
  std::vector<double> log_prior;
  std::vector<std::vector<double>> log_present;
  std::vector<std::vector<double>> log_absent;  // MVB
  // SVM: HYPE iff weights . x + bias >= 0.
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> objective_history;  // of the kept iterate, per epoch
  // LSA_1NN
  std::vector<double> idf;
  std::size_t rank = 0;
  std::vector<double> basis;        // dimension x rank, row-major
  std::vector<double> projections;  // n x rank, row-major
  std::vector<Label> train_labels;
  // Free-form run metadata (tool version, resolved config, input hashes).
  std::map<std::string, std::string> provenance;

  bool operator==(const Model&) const = default;
};

// SVM: Pegasos subgradient steps, iterates averaged over the second half of
// the epochs; of the epoch-end averages the lowest-objective one is kept.
// Throws Error(kEmptyTrainingSet), Error(kDegenerateData) for a single class
// (except MAJORITY), Error(kDimensionMismatch), Error(kInvalidArgument) for
// bad hyperparameters or dense features given to NB/LSA.
Model train(ClassifierKind kind, std::span<const FeatureVector> features, std::span<const Label> labels,
            const Hyperparams& hp = {});

// Throws Error(kDimensionMismatch).
Label predict(const Model& model, const FeatureVector& feature);

// Real-valued decision value, positive toward HYPE (NB: log-posterior
// difference, SVM: margin, LSA: best HYPE minus best NOT_HYPE cosine).
double decision_value(const Model& model, const FeatureVector& feature);

// SVM primal objective lambda/2 |w|^2 + mean hinge, bias included in w.
double svm_objective(const std::vector<double>& weights, double bias, std::span<const FeatureVector> features,
                     std::span<const Label> labels, double lambda);

// Pipeline: fits the feature extractor on `sentences` then the classifier.
// `table` is required for embedding features.
Model train_pipeline(ClassifierKind kind, FeatureKind feature_kind, std::span<const Sentence> sentences,
                     std::span<const Label> labels, const Hyperparams& hp = {},
                     const EmbeddingTable* table = nullptr, std::string embedding_ref = {});
FeatureVector featurize(const Model& model, const Sentence& sentence, const EmbeddingTable* table = nullptr);
Label predict(const Model& model, const Sentence& sentence, const EmbeddingTable* table = nullptr);

// Versioned JSON. Doubles are written in shortest round-trip form.
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);  // Error(kParse)
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

std::vector<Hyperparams> default_grid(ClassifierKind kind, std::uint64_t seed = 0);

struct GridResult {
  std::size_t best_index = 0;
  Hyperparams best;
  std::vector<Hyperparams> grid;
  // fold_f1[point][fold]: weighted F1 on the held-out fold.
  std::vector<std::vector<double>> fold_f1;
  std::vector<double> mean_f1;
};

// k-fold stratified cross-validation on the development data; the highest
// mean weighted F1 wins, ties to the earlier grid point. Features are refit on
// each training fold. Throws Error(kInsufficientClass), Error(kInvalidArgument)
// for an empty grid.
GridResult grid_search(ClassifierKind kind, FeatureKind feature_kind, std::span<const Sentence> sentences,
                       std::span<const Label> labels, const std::vector<Hyperparams>& grid, std::size_t k,
                       std::uint64_t seed, const EmbeddingTable* table = nullptr);

std::string format_grid(ClassifierKind kind, const GridResult& result);

}  // namespace hype
