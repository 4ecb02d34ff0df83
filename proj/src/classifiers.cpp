#include "hype/classifiers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hype/corpus.hpp"
#include "hype/error.hpp"
#include "hype/io.hpp"
#include "hype/random.hpp"
#include "json.hpp"

namespace hype {
namespace {

using json = nlohmann::json;

constexpr double kTieTolerance = 1e-9;

std::size_t slot(Label l) { return l == Label::kHype ? 0 : 1; }

void check_dimension(const Model& m, const FeatureVector& f) {
  if (f.dimension != m.dimension) {
    throw Error(ErrorKind::kDimensionMismatch, "feature dimension " + std::to_string(f.dimension) +
                                                   ", model expects " + std::to_string(m.dimension));
  }
}

void require_counts(ClassifierKind kind, std::span<const FeatureVector> features) {
  for (const auto& f : features) {
    if (!f.sparse) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string(classifier_name(kind)) + " needs bag-of-words features");
    }
    for (const auto& [_, v] : f.entries) {
      if (v < 0) throw Error(ErrorKind::kInvalidArgument, "negative feature count");
    }
  }
}

template <typename F>
void for_each_entry(const FeatureVector& f, F&& fn) {
  if (f.sparse) {
    for (const auto& [i, v] : f.entries) fn(i, v);
  } else {
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (f.values[i] != 0.0) fn(i, f.values[i]);
    }
  }
}

double dot(const std::vector<double>& w, const FeatureVector& f) {
  double s = 0;
  for_each_entry(f, [&](std::size_t i, double v) { s += w[i] * v; });
  return s;
}

void train_mnb(Model& m, std::span<const FeatureVector> features, std::span<const Label> labels) {
  const double a = m.hyperparams.alpha;
  std::vector<std::vector<double>> counts(2, std::vector<double>(m.dimension, 0.0));
  std::vector<double> totals(2, 0.0);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t c = slot(labels[i]);
    for (const auto& [t, v] : features[i].entries) {
      counts[c][t] += v;
      totals[c] += v;
    }
  }
  m.log_present.assign(2, std::vector<double>(m.dimension));
  for (std::size_t c = 0; c < 2; ++c) {
    const double denom = totals[c] + a * static_cast<double>(m.dimension);
    for (std::size_t t = 0; t < m.dimension; ++t) m.log_present[c][t] = std::log((counts[c][t] + a) / denom);
  }
}

void train_mvb(Model& m, std::span<const FeatureVector> features, std::span<const Label> labels) {
  const double a = m.hyperparams.alpha;
  std::vector<std::vector<double>> df(2, std::vector<double>(m.dimension, 0.0));
  std::vector<double> n(2, 0.0);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t c = slot(labels[i]);
    n[c] += 1;
    for (const auto& [t, v] : features[i].entries) {
      if (v > 0) df[c][t] += 1;
    }
  }
  m.log_present.assign(2, std::vector<double>(m.dimension));
  m.log_absent.assign(2, std::vector<double>(m.dimension));
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t = 0; t < m.dimension; ++t) {
      const double p = (df[c][t] + a) / (n[c] + 2 * a);
      m.log_present[c][t] = std::log(p);
      m.log_absent[c][t] = std::log1p(-p);
    }
  }
}

void train_svm(Model& m, std::span<const FeatureVector> features, std::span<const Label> labels) {
  const std::size_t n = features.size();
  const double lambda = 1.0 / (m.hyperparams.c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);
  // w[dimension] is the bias weight on a constant 1 feature.
  std::vector<double> w(m.dimension + 1, 0.0), avg(m.dimension + 1, 0.0), best;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(m.hyperparams.seed);
  std::uint64_t t = 0;
  std::uint64_t averaged = 0;
  for (int epoch = 0; epoch < m.hyperparams.epochs; ++epoch) {
    // Averaging restarts halfway (suffix averaging).
    if (epoch > 0 && epoch == m.hyperparams.epochs / 2) averaged = 0;
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = labels[i] == Label::kHype ? 1.0 : -1.0;
      const double margin = y * (dot(w, features[i]) + w[m.dimension]);
      const double shrink = 1.0 - eta * lambda;
      for (double& x : w) x *= shrink;
      if (margin < 1.0) {
        for_each_entry(features[i], [&](std::size_t j, double v) { w[j] += eta * y * v; });
        w[m.dimension] += eta * y;
      }
      double norm = 0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > radius) {
        for (double& x : w) x *= radius / norm;
      }
      const double k = 1.0 / static_cast<double>(++averaged);
      for (std::size_t j = 0; j < w.size(); ++j) avg[j] += (w[j] - avg[j]) * k;
    }
    // Best epoch-end averaged iterate so far.
    const std::vector<double> weights(avg.begin(), avg.end() - 1);
    const double objective = svm_objective(weights, avg.back(), features, labels, lambda);
    if (m.objective_history.empty() || objective < m.objective_history.back()) {
      best = avg;
      m.objective_history.push_back(objective);
    } else {
      m.objective_history.push_back(m.objective_history.back());
    }
  }
  m.bias = best.back();
  best.pop_back();
  m.weights = std::move(best);
}

std::vector<double> tfidf(const Model& m, const FeatureVector& f) {
  std::vector<double> v(m.dimension, 0.0);
  double norm = 0;
  for (const auto& [t, c] : f.entries) {
    v[t] = c * m.idf[t];
    norm += v[t] * v[t];
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

std::vector<double> project(const Model& m, const std::vector<double>& v) {
  std::vector<double> p(m.rank, 0.0);
  for (std::size_t t = 0; t < m.dimension; ++t) {
    if (v[t] == 0.0) continue;
    const double* row = &m.basis[t * m.rank];
    for (std::size_t r = 0; r < m.rank; ++r) p[r] += v[t] * row[r];
  }
  return p;
}

void train_lsa(Model& m, std::span<const FeatureVector> features, std::span<const Label> labels) {
  const std::size_t n = features.size();
  std::vector<double> df(m.dimension, 0.0);
  for (const auto& f : features) {
    for (const auto& [t, v] : f.entries) {
      if (v > 0) df[t] += 1;
    }
  }
  m.idf.resize(m.dimension);
  for (std::size_t t = 0; t < m.dimension; ++t) {
    m.idf[t] = std::log((1.0 + static_cast<double>(n)) / (1.0 + df[t])) + 1.0;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.dimension), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = tfidf(m, features[j]);
    for (std::size_t t = 0; t < m.dimension; ++t) a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = v[t];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const Eigen::MatrixXd& u = svd.matrixU();
  m.rank = std::min<std::size_t>(m.hyperparams.rank, static_cast<std::size_t>(u.cols()));
  m.basis.resize(m.dimension * m.rank);
  for (std::size_t t = 0; t < m.dimension; ++t) {
    for (std::size_t r = 0; r < m.rank; ++r) {
      m.basis[t * m.rank + r] = u(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(r));
    }
  }
  m.projections.clear();
  m.projections.reserve(n * m.rank);
  for (std::size_t j = 0; j < n; ++j) {
    const auto p = project(m, tfidf(m, features[j]));
    m.projections.insert(m.projections.end(), p.begin(), p.end());
  }
  m.train_labels.assign(labels.begin(), labels.end());
}

// Cosine of the query with every training projection.
std::vector<double> lsa_cosines(const Model& m, const FeatureVector& f) {
  const auto q = project(m, tfidf(m, f));
  double qn = 0;
  for (double x : q) qn += x * x;
  qn = std::sqrt(qn);
  const std::size_t n = m.train_labels.size();
  std::vector<double> cos(n, 0.0);
  if (qn == 0) return cos;
  for (std::size_t j = 0; j < n; ++j) {
    const double* p = &m.projections[j * m.rank];
    double d = 0, pn = 0;
    for (std::size_t r = 0; r < m.rank; ++r) {
      d += q[r] * p[r];
      pn += p[r] * p[r];
    }
    if (pn > 0) cos[j] = d / (qn * std::sqrt(pn));
  }
  return cos;
}

std::array<double, 2> nb_scores(const Model& m, const FeatureVector& f) {
  std::array<double, 2> s{};
  for (std::size_t c = 0; c < 2; ++c) {
    s[c] = m.log_prior[c];
    if (m.kind == ClassifierKind::kMnb) {
      for_each_entry(f, [&](std::size_t t, double v) { s[c] += v * m.log_present[c][t]; });
    } else {
      for (double x : m.log_absent[c]) s[c] += x;
      for_each_entry(f, [&](std::size_t t, double v) {
        if (v > 0) s[c] += m.log_present[c][t] - m.log_absent[c][t];
      });
    }
  }
  return s;
}

// json helpers
json labels_json(const std::vector<Label>& labels) {
  json a = json::array();
  for (Label l : labels) a.push_back(label_name(l));
  return a;
}

Label label_from(const json& j) {
  auto l = parse_label(j.get<std::string>());
  if (!l) throw Error(ErrorKind::kParse, "bad label " + j.dump());
  return *l;
}

}  // namespace

const char* classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kMajority: return "MAJORITY";
    case ClassifierKind::kMnb: return "MNB";
    case ClassifierKind::kMvb: return "MVB";
    case ClassifierKind::kLsa1nn: return "LSA_1NN";
    case ClassifierKind::kSvm: return "SVM_LINEAR";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) {
  for (auto k : {ClassifierKind::kMajority, ClassifierKind::kMnb, ClassifierKind::kMvb, ClassifierKind::kLsa1nn,
                 ClassifierKind::kSvm}) {
    if (name == classifier_name(k)) return k;
  }
  if (name == "SVM") return ClassifierKind::kSvm;
  if (name == "LSA") return ClassifierKind::kLsa1nn;
  return std::nullopt;
}

const char* feature_name(FeatureKind kind) { return kind == FeatureKind::kBow ? "bow" : "embedding"; }

std::optional<FeatureKind> parse_feature(std::string_view name) {
  if (name == "bow") return FeatureKind::kBow;
  if (name == "embedding") return FeatureKind::kEmbedding;
  return std::nullopt;
}

std::string describe(ClassifierKind kind, const Hyperparams& hp) {
  switch (kind) {
    case ClassifierKind::kMajority: return "-";
    case ClassifierKind::kMnb:
    case ClassifierKind::kMvb: return "alpha=" + format_double(hp.alpha);
    case ClassifierKind::kLsa1nn: return "rank=" + std::to_string(hp.rank) + ",distance=cosine";
    case ClassifierKind::kSvm:
      return "C=" + format_double(hp.c) + ",epochs=" + std::to_string(hp.epochs) + ",seed=" + std::to_string(hp.seed);
  }
  return "?";
}

double svm_objective(const std::vector<double>& weights, double bias, std::span<const FeatureVector> features,
                     std::span<const Label> labels, double lambda) {
  double norm = bias * bias;
  for (double x : weights) norm += x * x;
  double hinge = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double y = labels[i] == Label::kHype ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * (dot(weights, features[i]) + bias));
  }
  return lambda / 2 * norm + hinge / static_cast<double>(features.size());
}

Model train(ClassifierKind kind, std::span<const FeatureVector> features, std::span<const Label> labels,
            const Hyperparams& hp) {
  if (features.size() != labels.size()) {
    throw Error(ErrorKind::kLengthMismatch, std::to_string(features.size()) + " feature vectors, " +
                                                std::to_string(labels.size()) + " labels");
  }
  if (features.empty()) throw Error(ErrorKind::kEmptyTrainingSet, "no training examples");
  Model m;
  m.kind = kind;
  m.hyperparams = hp;
  m.dimension = features[0].dimension;
  for (const auto& f : features) {
    if (f.dimension != m.dimension) {
      throw Error(ErrorKind::kDimensionMismatch, "training vectors of dimension " + std::to_string(m.dimension) +
                                                     " and " + std::to_string(f.dimension));
    }
  }
  std::size_t hype = 0;
  for (Label l : labels) hype += l == Label::kHype;
  const std::size_t n = labels.size();
  m.majority = hype * 2 >= n ? Label::kHype : Label::kNotHype;
  if (kind == ClassifierKind::kMajority) return m;
  if (hype == 0 || hype == n) {
    throw Error(ErrorKind::kDegenerateData, std::string(classifier_name(kind)) + " needs both classes");
  }
  m.log_prior = {std::log(static_cast<double>(hype) / n), std::log(static_cast<double>(n - hype) / n)};
  switch (kind) {
    case ClassifierKind::kMnb:
    case ClassifierKind::kMvb:
      if (!(hp.alpha > 0)) throw Error(ErrorKind::kInvalidArgument, "alpha must be positive");
      require_counts(kind, features);
      if (kind == ClassifierKind::kMnb) {
        train_mnb(m, features, labels);
      } else {
        train_mvb(m, features, labels);
      }
      break;
    case ClassifierKind::kSvm:
      if (!(hp.c > 0) || hp.epochs < 1) throw Error(ErrorKind::kInvalidArgument, "C must be positive, epochs >= 1");
      m.log_prior.clear();
      train_svm(m, features, labels);
      break;
    case ClassifierKind::kLsa1nn:
      if (hp.rank < 1) throw Error(ErrorKind::kInvalidArgument, "rank must be >= 1");
      require_counts(kind, features);
      m.log_prior.clear();
      train_lsa(m, features, labels);
      break;
    case ClassifierKind::kMajority: break;
  }
  return m;
}

double decision_value(const Model& m, const FeatureVector& f) {
  check_dimension(m, f);
  switch (m.kind) {
    case ClassifierKind::kMajority: return m.majority == Label::kHype ? 1.0 : -1.0;
    case ClassifierKind::kMnb:
    case ClassifierKind::kMvb: {
      if (!f.sparse) throw Error(ErrorKind::kInvalidArgument, "bag-of-words features expected");
      const auto s = nb_scores(m, f);
      return s[0] - s[1];
    }
    case ClassifierKind::kSvm: return dot(m.weights, f) + m.bias;
    case ClassifierKind::kLsa1nn: {
      if (!f.sparse) throw Error(ErrorKind::kInvalidArgument, "bag-of-words features expected");
      const auto cos = lsa_cosines(m, f);
      double best[2] = {-2.0, -2.0};
      for (std::size_t j = 0; j < cos.size(); ++j) {
        auto& b = best[slot(m.train_labels[j])];
        b = std::max(b, cos[j]);
      }
      return best[0] - best[1];
    }
  }
  return 0.0;
}

Label predict(const Model& m, const FeatureVector& f) {
  if (m.kind == ClassifierKind::kLsa1nn) {
    check_dimension(m, f);
    if (!f.sparse) throw Error(ErrorKind::kInvalidArgument, "bag-of-words features expected");
    const auto cos = lsa_cosines(m, f);
    std::size_t best = 0;
    for (std::size_t j = 1; j < cos.size(); ++j) {
      if (cos[j] > cos[best]) best = j;
    }
    return m.train_labels[best];
  }
  const double v = decision_value(m, f);
  if (m.kind == ClassifierKind::kSvm) return v >= 0 ? Label::kHype : Label::kNotHype;
  if (m.kind == ClassifierKind::kMajority) return m.majority;
  return v >= -kTieTolerance ? Label::kHype : Label::kNotHype;
}

Model train_pipeline(ClassifierKind kind, FeatureKind feature_kind, std::span<const Sentence> sentences,
                     std::span<const Label> labels, const Hyperparams& hp, const EmbeddingTable* table,
                     std::string embedding_ref) {
  if (sentences.empty()) throw Error(ErrorKind::kEmptyTrainingSet, "no training sentences");
  std::vector<FeatureVector> features;
  Vocabulary vocab;
  if (feature_kind == FeatureKind::kBow) {
    vocab = fit_vocabulary(sentences);
    for (const auto& s : sentences) features.push_back(bow(s, vocab));
  } else {
    if (!table) throw Error(ErrorKind::kInvalidArgument, "embedding features need an embedding table");
    for (const auto& s : sentences) features.push_back(avg_embedding(s, *table));
  }
  Model m = train(kind, features, labels, hp);
  m.feature_kind = feature_kind;
  m.vocabulary = std::move(vocab);
  m.embedding_ref = std::move(embedding_ref);
  return m;
}

FeatureVector featurize(const Model& m, const Sentence& s, const EmbeddingTable* table) {
  if (m.feature_kind == FeatureKind::kBow) return bow(s, m.vocabulary);
  if (!table) throw Error(ErrorKind::kInvalidArgument, "model uses embeddings; no table given");
  if (table->dimension() != m.dimension) {
    throw Error(ErrorKind::kDimensionMismatch, "embedding dimension " + std::to_string(table->dimension()) +
                                                   ", model expects " + std::to_string(m.dimension));
  }
  return avg_embedding(s, *table);
}

Label predict(const Model& m, const Sentence& s, const EmbeddingTable* table) {
  return predict(m, featurize(m, s, table));
}

std::string model_to_json(const Model& m) {
  json j;
  j["format"] = "hype-model";
  j["version"] = m.format_version;
  j["kind"] = classifier_name(m.kind);
  j["hyperparams"] = {{"alpha", m.hyperparams.alpha},
                      {"c", m.hyperparams.c},
                      {"epochs", m.hyperparams.epochs},
                      {"seed", m.hyperparams.seed},
                      {"rank", m.hyperparams.rank}};
  j["dimension"] = m.dimension;
  j["features"] = {{"kind", feature_name(m.feature_kind)},
                   {"terms", m.vocabulary.terms()},
                   {"document_frequency", m.vocabulary.document_frequencies()},
                   {"total_documents", m.vocabulary.total_documents()},
                   {"embedding_ref", m.embedding_ref}};
  j["majority"] = label_name(m.majority);
  j["log_prior"] = m.log_prior;
  j["log_present"] = m.log_present;
  j["log_absent"] = m.log_absent;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["objective_history"] = m.objective_history;
  j["idf"] = m.idf;
  j["rank"] = m.rank;
  j["basis"] = m.basis;
  j["projections"] = m.projections;
  j["train_labels"] = labels_json(m.train_labels);
  if (!m.provenance.empty()) j["provenance"] = m.provenance;
  return j.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "hype-model") throw Error(ErrorKind::kParse, "not a model file");
    Model m;
    m.format_version = j.at("version").get<int>();
    if (m.format_version != 1) {
      throw Error(ErrorKind::kParse, "unsupported model version " + std::to_string(m.format_version));
    }
    const auto kind = parse_classifier(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorKind::kParse, "unknown classifier kind");
    m.kind = *kind;
    const auto& hp = j.at("hyperparams");
    m.hyperparams.alpha = hp.at("alpha").get<double>();
    m.hyperparams.c = hp.at("c").get<double>();
    m.hyperparams.epochs = hp.at("epochs").get<int>();
    m.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    m.hyperparams.rank = hp.at("rank").get<std::size_t>();
    m.dimension = j.at("dimension").get<std::size_t>();
    const auto& f = j.at("features");
    const auto fk = parse_feature(f.at("kind").get<std::string>());
    if (!fk) throw Error(ErrorKind::kParse, "unknown feature kind");
    m.feature_kind = *fk;
    m.vocabulary = Vocabulary::from_parts(f.at("terms").get<std::vector<std::string>>(),
                                          f.at("document_frequency").get<std::vector<std::size_t>>(),
                                          f.at("total_documents").get<std::size_t>());
    m.embedding_ref = f.at("embedding_ref").get<std::string>();
    m.majority = label_from(j.at("majority"));
    m.log_prior = j.at("log_prior").get<std::vector<double>>();
    m.log_present = j.at("log_present").get<std::vector<std::vector<double>>>();
    m.log_absent = j.at("log_absent").get<std::vector<std::vector<double>>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.objective_history = j.at("objective_history").get<std::vector<double>>();
    m.idf = j.at("idf").get<std::vector<double>>();
    m.rank = j.at("rank").get<std::size_t>();
    m.basis = j.at("basis").get<std::vector<double>>();
    m.projections = j.at("projections").get<std::vector<double>>();
    for (const auto& l : j.at("train_labels")) m.train_labels.push_back(label_from(l));
    if (j.contains("provenance")) m.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    const bool ok =
        (m.kind != ClassifierKind::kMnb && m.kind != ClassifierKind::kMvb) ||
        (m.log_prior.size() == 2 && m.log_present.size() == 2 && m.log_present[0].size() == m.dimension &&
         m.log_present[1].size() == m.dimension &&
         (m.kind == ClassifierKind::kMnb ||
          (m.log_absent.size() == 2 && m.log_absent[0].size() == m.dimension && m.log_absent[1].size() == m.dimension)));
    const bool svm_ok = m.kind != ClassifierKind::kSvm || m.weights.size() == m.dimension;
    const bool lsa_ok = m.kind != ClassifierKind::kLsa1nn ||
                        (m.idf.size() == m.dimension && m.basis.size() == m.dimension * m.rank &&
                         m.projections.size() == m.train_labels.size() * m.rank && !m.train_labels.empty());
    if (!ok || !svm_ok || !lsa_ok) throw Error(ErrorKind::kParse, "model parameter arrays have wrong sizes");
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model file: ") + e.what());
  }
}

void save_model(const Model& m, const std::filesystem::path& path) { write_file(path, model_to_json(m)); }

Model load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

std::vector<Hyperparams> default_grid(ClassifierKind kind, std::uint64_t seed) {
  std::vector<Hyperparams> grid;
  Hyperparams base;
  base.seed = seed;
  switch (kind) {
    case ClassifierKind::kMajority: grid.push_back(base); break;
    case ClassifierKind::kMnb:
    case ClassifierKind::kMvb:
      for (double a : {0.1, 0.5, 1.0}) {
        base.alpha = a;
        grid.push_back(base);
      }
      break;
    case ClassifierKind::kSvm:
      for (double c : {0.01, 0.1, 1.0, 10.0}) {
        base.c = c;
        grid.push_back(base);
      }
      break;
    case ClassifierKind::kLsa1nn:
      for (std::size_t r : {50, 100, 200}) {
        base.rank = r;
        grid.push_back(base);
      }
      break;
  }
  return grid;
}

GridResult grid_search(ClassifierKind kind, FeatureKind feature_kind, std::span<const Sentence> sentences,
                       std::span<const Label> labels, const std::vector<Hyperparams>& grid, std::size_t k,
                       std::uint64_t seed, const EmbeddingTable* table) {
  if (grid.empty()) throw Error(ErrorKind::kInvalidArgument, "empty hyperparameter grid");
  if (sentences.size() != labels.size()) throw Error(ErrorKind::kLengthMismatch, "sentences and labels differ");
  const auto folds = stratified_kfold(std::vector<Label>(labels.begin(), labels.end()), k, seed);
  GridResult r;
  r.grid = grid;
  for (const auto& hp : grid) {
    std::vector<double> scores;
    for (const auto& fold : folds) {
      std::vector<Sentence> train_s;
      std::vector<Label> train_l, gold, pred;
      for (auto i : fold.train) {
        train_s.push_back(sentences[i]);
        train_l.push_back(labels[i]);
      }
      const Model m = train_pipeline(kind, feature_kind, train_s, train_l, hp, table);
      for (auto i : fold.test) {
        gold.push_back(labels[i]);
        pred.push_back(predict(m, sentences[i], table));
      }
      scores.push_back(evaluate(gold, pred).weighted.f1);
    }
    double mean = 0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    r.fold_f1.push_back(std::move(scores));
    r.mean_f1.push_back(mean);
    if (r.mean_f1.size() == 1 || mean > r.mean_f1[r.best_index]) r.best_index = r.mean_f1.size() - 1;
  }
  r.best = grid[r.best_index];
  return r;
}

std::string format_grid(ClassifierKind kind, const GridResult& r) {
  std::ostringstream out;
  for (std::size_t p = 0; p < r.grid.size(); ++p) {
    out << (p == r.best_index ? "* " : "  ") << describe(kind, r.grid[p]) << "\tmean_f1=" << format_metric(r.mean_f1[p])
        << "\tfolds=";
    for (std::size_t f = 0; f < r.fold_f1[p].size(); ++f) out << (f ? "," : "") << format_metric(r.fold_f1[p][f]);
    out << '\n';
  }
  return out.str();
}

}  // namespace hype
