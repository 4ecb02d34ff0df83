#include <csignal>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hype/classifiers.hpp"
#include "hype/corpus.hpp"
#include "hype/error.hpp"
#include "hype/eval.hpp"
#include "hype/guidelines.hpp"
#include "hype/io.hpp"
#include "hype/lexicon.hpp"
#include "hype/llm.hpp"
#include "hype/service.hpp"
#include "json.hpp"

using namespace hype;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string lexicon;
  std::string resources;
};

LexiconBundle lexicon_for(const Globals& g) {
  if (g.lexicon.empty() && g.resources.empty()) return load_default_lexicon();
  const fs::path lex = g.lexicon.empty() ? default_data_dir() / "novelty.tsv" : fs::path(g.lexicon);
  const fs::path res = g.resources.empty() ? default_data_dir() / "resources.txt" : fs::path(g.resources);
  return load_lexicon(lex, res);
}

// Reproducibility header: tool version, every resolved option of the
// subcommand, and a content hash per input file.
std::vector<std::string> provenance(const CLI::App& sub, const Globals& g, std::vector<fs::path> inputs) {
  std::vector<std::string> out = {std::string("hype ") + HYPE_VERSION + " " + sub.get_name()};
  inputs.push_back(g.lexicon.empty() ? default_data_dir() / "novelty.tsv" : fs::path(g.lexicon));
  inputs.push_back(g.resources.empty() ? default_data_dir() / "resources.txt" : fs::path(g.resources));
  std::istringstream config(sub.config_to_str(true, false));
  for (std::string line; std::getline(config, line);) {
    if (!line.empty() && line[0] != '[') out.push_back("config " + line);
  }
  for (const auto& p : inputs) {
    if (fs::is_regular_file(p)) out.push_back("input " + p.string() + " sha256=" + sha256_hex(read_file(p)));
    else out.push_back("input " + p.string());
  }
  return out;
}

std::string comment_block(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "# " + l + "\n";
  return out;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::vector<LabeledExample> select_part(const LabeledDataset& ds, const std::string& part, double ratio,
                                        std::optional<std::uint64_t> seed) {
  if (part == "all") {
    std::vector<LabeledExample> out;
    for (const auto& ex : ds.examples) {
      if (ex.status == Status::kDiscarded) continue;
      if (ex.status != Status::kGold || !ex.label) {
        throw Error(ErrorKind::kInvalidArgument, "example " + ex.id() + " is not GOLD");
      }
      out.push_back(ex);
    }
    return out;
  }
  Split s = split(ds, ratio, seed.value_or(ds.split_seed));
  return part == "test" ? std::move(s.test) : std::move(s.development);
}

// sample ---------------------------------------------------------------------

struct SampleArgs {
  std::vector<std::string> corpus;
  std::size_t per_adjective = 50;
  std::uint64_t seed = 0;
  std::string out;
};

void run_sample(const CLI::App& sub, const Globals& g, const SampleArgs& a) {
  const auto bundle = lexicon_for(g);
  std::vector<fs::path> paths(a.corpus.begin(), a.corpus.end());
  const Corpus corpus = ingest(paths, bundle.lexicon);
  LabeledDataset ds = sample(corpus, bundle.lexicon, a.per_adjective, a.seed);
  std::vector<fs::path> inputs;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().filename().string()[0] != '.') files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      inputs.insert(inputs.end(), files.begin(), files.end());
    } else {
      inputs.push_back(p);
    }
  }
  ds.comments = provenance(sub, g, inputs);
  ds.comments.push_back("documents " + std::to_string(corpus.documents().size()) + " sentences " +
                        std::to_string(corpus.sentences().size()));
  emit(a.out, format_dataset(ds));
  std::cerr << "sampled " << ds.examples.size() << " examples from " << corpus.documents().size()
            << " documents\n";
}

// lint / suggest -----------------------------------------------------------

struct LintArgs {
  std::vector<std::string> files;
  std::string format = "text";
  bool all = false;
  int threshold = 2;
};

std::string decision_text(const Sentence& s, const CandidateOccurrence& occ, const GuidelineDecision& d) {
  std::ostringstream out;
  const Token& t = s.tokens.at(occ.token_index);
  out << s.id << " " << t.start << "-" << t.end << " '" << t.text << "' " << label_name(d.label);
  if (!d.rationales.empty()) out << " (" << format_rationales(d.rationales) << ")";
  out << " [" << confidence_name(d.confidence) << "]\n";
  for (const auto& step : d.trace) {
    out << "    step " << step.step << (step.fired ? " + " : " - ") << step.evidence << "\n";
  }
  return out.str();
}

int run_lint(const CLI::App& sub, const Globals& g, const LintArgs& a) {
  const auto bundle = lexicon_for(g);
  std::vector<fs::path> paths(a.files.begin(), a.files.end());
  const Corpus corpus = ingest(paths, bundle.lexicon);
  EngineConfig config;
  config.broader_context_threshold = a.threshold;
  const BatchResult result = decide_batch(corpus.sentences(), bundle.lexicon, bundle.resources, config);
  std::size_t flagged = 0;
  std::string out = comment_block(provenance(sub, g, paths));
  for (const auto& item : result.items) {
    if (item.decision.label == Label::kHype) ++flagged;
    if (!a.all && item.decision.label != Label::kHype) continue;
    if (a.format == "records") {
      out += format_trace_record(item.occurrence, item.decision) + "\n";
    } else {
      out += decision_text(*corpus.find_sentence(item.occurrence.sentence_id), item.occurrence, item.decision);
    }
  }
  for (const auto& e : result.errors) {
    std::cerr << "error: " << e.sentence_id << " token " << e.token_index << ": " << e.message << "\n";
  }
  if (a.format == "text") {
    out += "# " + std::to_string(flagged) + " of " + std::to_string(result.items.size()) +
           " candidate adjectives flagged\n";
  }
  std::cout << out;
  return result.errors.empty() ? 0 : 1;
}

struct SuggestArgs {
  std::string sentence;
  std::string format = "text";
  int threshold = 2;
};

void run_suggest(const Globals& g, const SuggestArgs& a) {
  const auto bundle = lexicon_for(g);
  const Sentence s = prepare_sentence(a.sentence, bundle.lexicon, "input:s1");
  EngineConfig config;
  config.broader_context_threshold = a.threshold;
  const auto candidates = find_candidates(s, bundle.lexicon);
  if (candidates.empty()) {
    std::cerr << "no lexicon adjective in the sentence\n";
    return;
  }
  for (const auto& occ : candidates) {
    const auto d = decide(occ, s, bundle.lexicon, bundle.resources, config);
    std::cout << (a.format == "records" ? format_trace_record(occ, d) + "\n" : decision_text(s, occ, d));
  }
}

// serve ----------------------------------------------------------------------

struct ServeArgs {
  std::string dataset;
  std::string ui;
  std::string bind = "127.0.0.1:8765";
  std::string log;
  std::vector<std::string> annotators = {"A", "B", "C"};
  std::string partition;
  int threshold = 2;
};

volatile std::sig_atomic_t g_stop = 0;

extern "C" void on_signal(int) { g_stop = 1; }

void run_serve(const Globals& g, const ServeArgs& a) {
  const auto bundle = lexicon_for(g);
  LabeledDataset ds = load_dataset(a.dataset, bundle.lexicon);
  StoreOptions options;
  options.annotators = a.annotators;
  options.engine.broader_context_threshold = a.threshold;
  if (!a.partition.empty()) {
    const auto lines = split_lines(read_file(a.partition));
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const std::string line = trim(lines[n]);
      if (line.empty() || line[0] == '#') continue;
      const auto f = split(line, '\t');
      if (f.size() != 2) {
        throw Error(ErrorKind::kParse, a.partition + " line " + std::to_string(n + 1) + ": expected annotator<TAB>example_id");
      }
      options.partition[f[0]].insert(f[1]);
    }
  }
  const fs::path log = a.log.empty() ? fs::path(a.dataset + ".log.jsonl") : fs::path(a.log);
  AnnotationStore store(std::move(ds), bundle, log, options);
  std::optional<fs::path> ui;
  if (!a.ui.empty()) ui = a.ui;
  AnnotationServer server(store, ui);
  const auto [host, port] = parse_bind_address(a.bind);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const int bound = server.start(host, port);
  const StoreStatus st = store.status();
  std::cerr << "serving " << st.examples << " examples on http://" << host << ":" << bound << " (log " << log.string()
            << ", " << st.records << " records replayed)" << std::endl;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  server.stop();
  std::cerr << "stopped\n";
}

// train / eval ---------------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::string method = "mnb";
  std::string features = "bow";
  std::string embeddings;
  std::string grid = "none";
  std::uint64_t seed = 0;
  std::string out;
  std::string split = "dev";
  double ratio = 0.8;
  std::optional<std::uint64_t> split_seed;
  double alpha = 1.0;
  double c = 1.0;
  int epochs = 30;
  std::size_t rank = 100;
  std::size_t folds = 5;
};

std::optional<EmbeddingTable> embeddings_for(FeatureKind fk, const std::string& path) {
  if (fk != FeatureKind::kEmbedding) return std::nullopt;
  if (path.empty()) throw Error(ErrorKind::kInvalidArgument, "--embeddings is required for embedding features");
  return load_embeddings(path);
}

void run_train(const CLI::App& sub, const Globals& g, const TrainArgs& a) {
  const auto bundle = lexicon_for(g);
  const LabeledDataset ds = load_dataset(a.dataset, bundle.lexicon);
  static const std::map<std::string, ClassifierKind> kinds = {{"majority", ClassifierKind::kMajority},
                                                              {"mnb", ClassifierKind::kMnb},
                                                              {"mvb", ClassifierKind::kMvb},
                                                              {"lsa", ClassifierKind::kLsa1nn},
                                                              {"svm", ClassifierKind::kSvm}};
  const ClassifierKind kind = kinds.at(a.method);
  const FeatureKind fk = a.features == "embedding" ? FeatureKind::kEmbedding : FeatureKind::kBow;
  const auto table = embeddings_for(fk, a.embeddings);
  const auto part = select_part(ds, a.split, a.ratio, a.split_seed);
  std::vector<Sentence> sentences;
  for (const auto& ex : part) sentences.push_back(ex.sentence);
  const auto labels = labels_of(part);

  Hyperparams hp;
  hp.alpha = a.alpha;
  hp.c = a.c;
  hp.epochs = a.epochs;
  hp.seed = a.seed;
  hp.rank = a.rank;
  std::string grid_table;
  if (a.grid == "default") {
    auto grid = default_grid(kind, a.seed);
    for (auto& p : grid) p.epochs = a.epochs;
    const GridResult r = grid_search(kind, fk, sentences, labels, grid, a.folds, a.seed, table ? &*table : nullptr);
    hp = r.best;
    grid_table = format_grid(kind, r);
    std::cout << grid_table;
  }
  Model m = train_pipeline(kind, fk, sentences, labels, hp, table ? &*table : nullptr, a.embeddings);
  std::vector<fs::path> inputs = {a.dataset};
  if (!a.embeddings.empty()) inputs.push_back(a.embeddings);
  const auto header = provenance(sub, g, inputs);
  for (std::size_t i = 0; i < header.size(); ++i) m.provenance["header." + std::to_string(i)] = header[i];
  m.provenance["dataset_fingerprint"] = dataset_fingerprint(ds);
  m.provenance["training_examples"] = std::to_string(part.size());
  m.provenance["hyperparameters"] = describe(kind, hp);
  if (!grid_table.empty()) m.provenance["grid"] = grid_table;
  save_model(m, a.out);
  std::cout << classifier_name(kind) << " " << feature_name(fk) << " " << describe(kind, hp) << " trained on "
            << part.size() << " examples -> " << a.out << "\n";
}

struct EvalArgs {
  std::string model;
  std::string dataset;
  std::string split = "test";
  std::string report;
  std::string format = "text";
  std::string embeddings;
  double ratio = 0.8;
  std::optional<std::uint64_t> split_seed;
};

void run_eval_cmd(const CLI::App& sub, const Globals& g, const EvalArgs& a) {
  const auto bundle = lexicon_for(g);
  const LabeledDataset ds = load_dataset(a.dataset, bundle.lexicon);
  const Model m = load_model(a.model);
  const std::string emb = a.embeddings.empty() ? m.embedding_ref : a.embeddings;
  const auto table = embeddings_for(m.feature_kind, emb);
  const auto part = select_part(ds, a.split, a.ratio, a.split_seed);
  std::vector<Label> gold, pred;
  std::vector<std::string> adjectives;
  for (const auto& ex : part) {
    gold.push_back(*ex.label);
    pred.push_back(predict(m, ex.sentence, table ? &*table : nullptr));
    adjectives.push_back(ex.adjective);
  }
  EvalReport r = evaluate(gold, pred, adjectives);
  r.dataset_fingerprint = dataset_fingerprint(ds);
  r.hyperparameters = std::string(classifier_name(m.kind)) + " " + feature_name(m.feature_kind) + " " +
                      describe(m.kind, m.hyperparams);
  std::vector<fs::path> inputs = {a.model, a.dataset};
  if (!emb.empty()) inputs.push_back(emb);
  std::string out = comment_block(provenance(sub, g, inputs));
  if (a.format == "records") {
    out += report_records(r) + confusion_records(r.confusion);
  } else {
    out += format_report(r);
  }
  emit(a.report, out);
  if (!a.report.empty() && a.report != "-") std::cout << format_report(r);
}

// kappa ---------------------------------------------------------------------

struct KappaArgs {
  std::string annotations;
  std::string round = "initial";
  std::string dataset;
  std::string format = "text";
};

void run_kappa(const CLI::App& sub, const Globals& g, const KappaArgs& a) {
  const Round round = *parse_round(a.round);
  const AnnotationTable table = parse_annotations(read_file(a.annotations), round);
  std::map<std::string, std::string> adjective_of;
  std::vector<fs::path> inputs = {a.annotations};
  if (!a.dataset.empty()) {
    const auto bundle = lexicon_for(g);
    for (const auto& ex : load_dataset(a.dataset, bundle.lexicon).examples) adjective_of[ex.id()] = ex.adjective;
    inputs.push_back(a.dataset);
  }
  const AgreementReport r = disagreement_breakdown(table, adjective_of);
  std::string out = comment_block(provenance(sub, g, inputs));
  if (a.format == "records") {
    for (std::size_t i = 0; i < r.annotators.size(); ++i) {
      for (std::size_t j = i + 1; j < r.annotators.size(); ++j) {
        out += "kappa\t" + r.annotators[i] + "\t" + r.annotators[j] + "\t" +
               (r.kappa[i][j] ? format_double(*r.kappa[i][j]) : std::string("-")) + "\n";
      }
    }
    out += "overlapping\t" + std::to_string(r.overlapping) + "\n";
    out += "disagreements\t" + std::to_string(r.disagreements) + "\n";
    for (const auto& [adj, n] : r.disagreements_by_adjective) out += "adjective\t" + adj + "\t" + std::to_string(n) + "\n";
  } else {
    out += "round " + std::string(round_name(round)) + "\n" + format_agreement(r);
  }
  std::cout << out;
}

// llm-eval -------------------------------------------------------------------

struct LlmArgs {
  std::string dataset;
  std::string prompt = "broad";
  std::size_t k = 5;
  std::string endpoint;
  std::string cache;
  std::string split = "test";
  double ratio = 0.8;
  std::optional<std::uint64_t> split_seed;
  std::string model;
  std::size_t max_in_flight = 0;
  std::string report;
  std::string votes;
  std::string format = "text";
};

void run_llm(const CLI::App& sub, const Globals& g, const LlmArgs& a) {
  const auto bundle = lexicon_for(g);
  const LabeledDataset ds = load_dataset(a.dataset, bundle.lexicon);
  EndpointConfig config = load_endpoint_config(a.endpoint);
  if (!a.model.empty()) config.model = a.model;
  if (a.max_in_flight > 0) config.max_in_flight = a.max_in_flight;
  PromptTemplate tmpl;
  if (a.prompt == "broad" || a.prompt == "strict") {
    tmpl = builtin_template(a.prompt == "broad" ? "BROAD" : "STRICT");
  } else {
    tmpl = load_template(a.prompt, fs::path(a.prompt).stem().string());
  }
  const auto part = select_part(ds, a.split, a.ratio, a.split_seed);
  HttpEndpoint endpoint(config);
  ResponseCache cache = a.cache.empty() ? ResponseCache() : ResponseCache(fs::path(a.cache));
  LlmRunOptions options;
  options.k = a.k;
  options.max_in_flight = config.max_in_flight;
  LlmRunResult result = run_eval(part, tmpl, endpoint, cache, options);
  std::vector<fs::path> inputs = {a.dataset, a.endpoint};
  if (a.prompt != "broad" && a.prompt != "strict") inputs.push_back(a.prompt);
  const auto header = provenance(sub, g, inputs);
  std::string out = comment_block(header);
  out += "# requests " + std::to_string(result.requests) + " cache_hits " + std::to_string(result.cache_hits) +
         " excluded " + std::to_string(result.excluded) + "\n";
  if (result.report) {
    result.report->dataset_fingerprint = dataset_fingerprint(ds);
    out += a.format == "records" ? report_records(*result.report) + confusion_records(result.report->confusion)
                                 : format_report(*result.report);
  } else {
    out += "no parseable majority; no metrics\n";
  }
  emit(a.report, out);
  if (!a.votes.empty()) {
    nlohmann::json head = {{"provenance", header}};
    write_file(a.votes, head.dump() + "\n" + format_votes(result.votes));
  }
}

// report ---------------------------------------------------------------------

struct ReportArgs {
  std::string dataset;
  std::string format = "text";
};

void run_report(const CLI::App& sub, const Globals& g, const ReportArgs& a) {
  const auto bundle = lexicon_for(g);
  const LabeledDataset ds = load_dataset(a.dataset, bundle.lexicon);
  struct Row {
    std::size_t hype = 0, not_hype = 0, discarded = 0, disputed = 0;
  };
  std::map<std::string, Row> rows;
  Row total;
  for (const auto& ex : ds.examples) {
    Row& r = rows[ex.adjective];
    for (Row* x : {&r, &total}) {
      if (ex.status == Status::kDiscarded) ++x->discarded;
      else if (ex.status == Status::kDisputed) ++x->disputed;
      else if (ex.label == Label::kHype) ++x->hype;
      else ++x->not_hype;
    }
  }
  std::string out = comment_block(provenance(sub, g, {a.dataset}));
  auto share = [](const Row& r) {
    const std::size_t kept = r.hype + r.not_hype;
    return kept ? format_metric(static_cast<double>(r.hype) / static_cast<double>(kept)) : std::string("-");
  };
  char buf[160];
  if (a.format == "records") {
    out += "adjective\thype\tnot_hype\tdiscarded\tdisputed\thype_share\n";
    for (const auto& [adj, r] : rows) {
      out += adj + "\t" + std::to_string(r.hype) + "\t" + std::to_string(r.not_hype) + "\t" +
             std::to_string(r.discarded) + "\t" + std::to_string(r.disputed) + "\t" + share(r) + "\n";
    }
  } else {
    std::snprintf(buf, sizeof buf, "%-16s %6s %9s %10s %9s %6s\n", "adjective", "HYPE", "NOT_HYPE", "DISCARDED", "DISPUTED",
                  "share");
    out += buf;
    auto line = [&](const std::string& name, const Row& r) {
      std::snprintf(buf, sizeof buf, "%-16s %6zu %9zu %10zu %9zu %6s\n", name.c_str(), r.hype, r.not_hype, r.discarded,
                    r.disputed, share(r).c_str());
      out += buf;
    };
    for (const auto& [adj, r] : rows) line(adj, r);
    line("total", total);
  }
  std::cout << out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hype: detect promotional language around novelty adjectives"};
  app.set_version_flag("--version", std::string("hype ") + HYPE_VERSION);
  app.set_config("--config", "", "key=value config file; flags given on the command line win");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--lexicon", g.lexicon, "novelty lexicon TSV (default: shipped)");
  app.add_option("--resources", g.resources, "rule resources file (default: shipped)");

  const std::set<std::string> text_records = {"text", "records"};

  SampleArgs sa;
  auto* sample_cmd = app.add_subcommand("sample", "ingest a corpus and sample occurrences per adjective");
  sample_cmd->add_option("--corpus", sa.corpus, "corpus file or directory (repeatable)")->required();
  sample_cmd->add_option("--per-adjective", sa.per_adjective, "occurrences sampled per adjective")->capture_default_str();
  sample_cmd->add_option("--seed", sa.seed, "sampling seed")->capture_default_str();
  sample_cmd->add_option("--out", sa.out, "output dataset file")->required();

  LintArgs la;
  auto* lint_cmd = app.add_subcommand("lint", "flag promotional adjectives in documents with rationale traces");
  lint_cmd->add_option("files", la.files, "document files or directories")->required();
  lint_cmd->add_option("--format", la.format, "text or records")->check(CLI::IsMember(text_records))->capture_default_str();
  lint_cmd->add_flag("--all", la.all, "also print NOT_HYPE decisions");
  lint_cmd->add_option("--threshold", la.threshold, "promotional signals needed for the broader-context step")
      ->capture_default_str();

  SuggestArgs ga;
  auto* suggest_cmd = app.add_subcommand("suggest", "run the guideline engine on one sentence");
  suggest_cmd->add_option("--sentence,sentence", ga.sentence, "sentence text")->required();
  suggest_cmd->add_option("--format", ga.format, "text or records")->check(CLI::IsMember(text_records))->capture_default_str();
  suggest_cmd->add_option("--threshold", ga.threshold, "promotional signals needed for the broader-context step")
      ->capture_default_str();

  ServeArgs va;
  auto* serve_cmd = app.add_subcommand("serve", "run the annotation service");
  serve_cmd->add_option("--dataset", va.dataset, "dataset file to annotate")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--ui", va.ui, "directory served under /ui")->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--bind", va.bind, "host:port (port 0 picks a free one)")->capture_default_str();
  serve_cmd->add_option("--log", va.log, "annotation log (default: DATASET.log.jsonl)");
  serve_cmd->add_option("--annotators", va.annotators, "annotator ids")->delimiter(',')->capture_default_str();
  serve_cmd->add_option("--partition", va.partition, "annotator<TAB>example_id lines (default: full overlap)")
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--threshold", va.threshold, "engine broader-context threshold for suggestions")
      ->capture_default_str();

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "train a classifier on the development split");
  train_cmd->add_option("--dataset", ta.dataset, "GOLD dataset file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--method", ta.method, "mnb|mvb|lsa|svm|majority")
      ->check(CLI::IsMember({"mnb", "mvb", "lsa", "svm", "majority"}))->capture_default_str();
  train_cmd->add_option("--features", ta.features, "bow|embedding")
      ->check(CLI::IsMember({"bow", "embedding"}))->capture_default_str();
  train_cmd->add_option("--embeddings", ta.embeddings, "GloVe-format embedding file")->check(CLI::ExistingFile);
  train_cmd->add_option("--grid", ta.grid, "default (cross-validated grid) or none")
      ->check(CLI::IsMember({"default", "none"}))->capture_default_str();
  train_cmd->add_option("--seed", ta.seed, "SVM order and fold seed")->capture_default_str();
  train_cmd->add_option("--out", ta.out, "model file")->required();
  train_cmd->add_option("--split", ta.split, "dev or all")->check(CLI::IsMember({"dev", "all"}))->capture_default_str();
  train_cmd->add_option("--ratio", ta.ratio, "development share of the split")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  train_cmd->add_option("--split-seed", ta.split_seed, "split seed (default: the dataset's)");
  train_cmd->add_option("--alpha", ta.alpha, "NB smoothing without a grid")->capture_default_str();
  train_cmd->add_option("--C", ta.c, "SVM regularization without a grid")->capture_default_str();
  train_cmd->add_option("--epochs", ta.epochs, "SVM epochs")->capture_default_str();
  train_cmd->add_option("--rank", ta.rank, "LSA rank without a grid")->capture_default_str();
  train_cmd->add_option("--folds", ta.folds, "cross-validation folds for the grid")->capture_default_str();

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset split");
  eval_cmd->add_option("--model", ea.model, "model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--dataset", ea.dataset, "GOLD dataset file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", ea.split, "test, dev or all")->check(CLI::IsMember({"test", "dev", "all"}))
      ->capture_default_str();
  eval_cmd->add_option("--report", ea.report, "report file (default: stdout)");
  eval_cmd->add_option("--format", ea.format, "text or records")->check(CLI::IsMember(text_records))->capture_default_str();
  eval_cmd->add_option("--embeddings", ea.embeddings, "embedding file (default: the one named in the model)");
  eval_cmd->add_option("--ratio", ea.ratio, "development share of the split")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  eval_cmd->add_option("--split-seed", ea.split_seed, "split seed (default: the dataset's)");

  KappaArgs ka;
  auto* kappa_cmd = app.add_subcommand("kappa", "pairwise Cohen's kappa and disagreement counts");
  kappa_cmd->add_option("--annotations", ka.annotations, "service log or annotator/example/label TSV")
      ->required()->check(CLI::ExistingFile);
  kappa_cmd->add_option("--round", ka.round, "initial or post")->check(CLI::IsMember({"initial", "post"}))
      ->capture_default_str();
  kappa_cmd->add_option("--dataset", ka.dataset, "dataset for the per-adjective breakdown")->check(CLI::ExistingFile);
  kappa_cmd->add_option("--format", ka.format, "text or records")->check(CLI::IsMember(text_records))->capture_default_str();

  LlmArgs lm;
  auto* llm_cmd = app.add_subcommand("llm-eval", "zero-shot evaluation against a language-model endpoint");
  llm_cmd->add_option("--dataset", lm.dataset, "GOLD dataset file")->required()->check(CLI::ExistingFile);
  llm_cmd->add_option("--prompt", lm.prompt, "broad, strict or a template file")->capture_default_str();
  llm_cmd->add_option("--k", lm.k, "samples per example")->check(CLI::PositiveNumber)->capture_default_str();
  llm_cmd->add_option("--endpoint", lm.endpoint, "endpoint JSON config (token read from its token_env)")
      ->required()->check(CLI::ExistingFile);
  llm_cmd->add_option("--cache", lm.cache, "response cache file");
  llm_cmd->add_option("--split", lm.split, "test, dev or all")->check(CLI::IsMember({"test", "dev", "all"}))
      ->capture_default_str();
  llm_cmd->add_option("--ratio", lm.ratio, "development share of the split")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  llm_cmd->add_option("--split-seed", lm.split_seed, "split seed (default: the dataset's)");
  llm_cmd->add_option("--model", lm.model, "override the endpoint's model name");
  llm_cmd->add_option("--max-in-flight", lm.max_in_flight, "override the concurrent request cap");
  llm_cmd->add_option("--report", lm.report, "report file (default: stdout)");
  llm_cmd->add_option("--votes", lm.votes, "per-example vote records (JSON lines)");
  llm_cmd->add_option("--format", lm.format, "text or records")->check(CLI::IsMember(text_records))->capture_default_str();

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "per-adjective label counts of a dataset");
  report_cmd->add_option("--dataset", ra.dataset, "dataset file")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--format", ra.format, "text or records")->check(CLI::IsMember(text_records))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sample_cmd->parsed()) run_sample(*sample_cmd, g, sa);
    else if (lint_cmd->parsed()) return run_lint(*lint_cmd, g, la);
    else if (suggest_cmd->parsed()) run_suggest(g, ga);
    else if (serve_cmd->parsed()) run_serve(g, va);
    else if (train_cmd->parsed()) run_train(*train_cmd, g, ta);
    else if (eval_cmd->parsed()) run_eval_cmd(*eval_cmd, g, ea);
    else if (kappa_cmd->parsed()) run_kappa(*kappa_cmd, g, ka);
    else if (llm_cmd->parsed()) run_llm(*llm_cmd, g, lm);
    else if (report_cmd->parsed()) run_report(*report_cmd, g, ra);
  } catch (const Error& e) {
    std::cerr << "hype: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "hype: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
