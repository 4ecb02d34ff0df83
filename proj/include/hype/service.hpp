#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hype/corpus.hpp"
#include "hype/eval.hpp"
#include "hype/guidelines.hpp"
#include "hype/lexicon.hpp"

namespace hype {

enum class Round { kInitial, kPostDiscussion };

const char* round_name(Round round);  // "INITIAL", "POST_DISCUSSION"
// Also accepts "initial" and "post".
std::optional<Round> parse_round(std::string_view name);

struct StepAnswer {
  bool answer = false;
  std::string note;

  bool operator==(const StepAnswer&) const = default;
};

struct AnnotationRecord {
  std::string example_id;
  std::string annotator;
  Label label = Label::kNotHype;
  RationaleSet rationales;
  std::map<int, StepAnswer> step_answers;  // step 1..6
  Round round = Round::kInitial;
  std::string timestamp;
  std::uint64_t revision = 0;

  bool operator==(const AnnotationRecord&) const = default;
};

struct AnnotationSubmission {
  std::string example_id;
  std::string annotator;
  // Derived from complete step answers when absent; must agree otherwise.
  std::optional<Label> label;
  std::optional<RationaleSet> rationales;
  std::map<int, StepAnswer> step_answers;
  Round round = Round::kInitial;
  // Revision the client last saw for (example, annotator, round); 0 = none.
  std::uint64_t base_revision = 0;
};

enum class AdjudicationStatus { kPending, kResolved, kDiscarded };

const char* adjudication_name(AdjudicationStatus status);
std::optional<AdjudicationStatus> parse_adjudication(std::string_view name);

struct AdjudicationState {
  std::string example_id;
  AdjudicationStatus status = AdjudicationStatus::kPending;
  std::optional<Label> label;
  RationaleSet rationales;
  std::string note;
  std::string timestamp;

  bool operator==(const AdjudicationState&) const = default;
};

struct AdjudicationRequest {
  std::string example_id;
  AdjudicationStatus action = AdjudicationStatus::kResolved;  // RESOLVED or DISCARDED
  std::optional<Label> label;
  RationaleSet rationales;
  std::string note;
};

enum class ExampleState { kOpen, kGold, kPending, kDiscarded };

const char* example_state_name(ExampleState state);

struct Task {
  const LabeledExample* example = nullptr;
  GuidelineDecision suggestion;
};

struct Disagreement {
  std::string example_id;
  std::string adjective;
  std::string sentence;
  // Effective record per annotator (post-discussion if any, else initial).
  std::vector<AnnotationRecord> records;
};

struct StoreStatus {
  std::size_t examples = 0;
  std::size_t open = 0;
  std::size_t gold = 0;
  std::size_t pending = 0;
  std::size_t discarded = 0;
  std::size_t records = 0;
};

struct StoreOptions {
  std::vector<std::string> annotators = {"A", "B", "C"};
  // annotator -> assigned example ids; empty means every annotator sees
  // every example.
  std::map<std::string, std::set<std::string>> partition;
  EngineConfig engine;
  std::function<std::string()> clock;  // ISO-8601 UTC timestamps by default
};

// Annotation state over a fixed example set, persisted as an append-only
// JSON-lines log (one record per line, fsync'd) that is replayed on start.
//
// Log lines:
//   {"type":"header","version":1,"dataset":<fingerprint>}
//   {"type":"annotation","example","annotator","round","label","rationales",
//    "steps":[{"step","answer","note"}],"revision","timestamp"}
//   {"type":"adjudication","example","status","label","rationales","note",
//    "timestamp"}
//
// An example is GOLD when all its annotators agree (effective labels, the
// post-discussion record winning over the initial one) or an adjudication
// resolved it; PENDING when labels differ; DISCARDED by adjudication only.
// Thread-safe: writes are serialized, reads share a lock.
class AnnotationStore {
 public:
  // Throws Error(kCorruptLog) naming the offending line.
  AnnotationStore(LabeledDataset dataset, LexiconBundle lexicon, std::optional<std::filesystem::path> log_path,
                  StoreOptions options = {});
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  // Throws Error(kNotFound), Error(kInvalidArgument), Error(kConflict).
  AnnotationRecord submit(const AnnotationSubmission& submission);
  AdjudicationState adjudicate(const AdjudicationRequest& request);

  // Examples assigned to the annotator without a record in `round`; for the
  // post-discussion round only PENDING examples the annotator labeled.
  std::vector<Task> tasks(std::string_view annotator, Round round = Round::kInitial,
                          std::size_t limit = 20) const;
  std::vector<std::string> completed(std::string_view annotator, Round round = Round::kInitial) const;

  // Latest record per (example, annotator) for the round; POST_DISCUSSION
  // falls back to the initial record where no post-discussion one exists.
  AnnotationTable annotation_table(Round round) const;
  // Throws Error(kNoOverlap) before any example has two annotators.
  AgreementReport agreement(Round round) const;
  std::vector<Disagreement> disagreements() const;

  ExampleState state(std::string_view example_id) const;
  std::optional<AdjudicationState> adjudication(std::string_view example_id) const;
  std::vector<AnnotationRecord> records() const;
  StoreStatus status() const;

  // Dataset with labels, statuses and annotators filled in from the log.
  LabeledDataset dataset(bool gold_only = true) const;
  std::string export_dataset(bool gold_only = true) const;

  const LexiconBundle& lexicon() const { return lexicon_; }
  const std::vector<std::string>& annotators() const { return options_.annotators; }

 private:
  struct Key {
    std::string example;
    std::string annotator;
    Round round;
    auto operator<=>(const Key&) const = default;
  };

  void apply_annotation(const AnnotationRecord& record);
  void append(const std::string& line);
  bool assigned(const std::string& annotator, const std::string& example_id) const;
  std::vector<std::string> assigned_annotators(const std::string& example_id) const;
  const AnnotationRecord* effective(const std::string& example, const std::string& annotator) const;
  ExampleState state_locked(const std::string& example_id) const;
  const LabeledExample& example_locked(std::string_view example_id) const;
  std::string now() const;

  LabeledDataset dataset_;
  LexiconBundle lexicon_;
  StoreOptions options_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<Key, AnnotationRecord> latest_;
  std::vector<AnnotationRecord> history_;
  std::map<std::string, AdjudicationState, std::less<>> adjudications_;
  int fd_ = -1;
  mutable std::shared_mutex mu_;
};

// HTTP front end:
//   GET  /tasks?annotator=ID[&round=initial|post][&limit=N]
//   GET  /completed?annotator=ID[&round=]
//   POST /annotations        submission JSON, returns the record
//   GET  /agreement?round=initial|post
//   GET  /disagreements
//   POST /adjudications      {"example_id","action":"resolve"|"discard",...}
//   GET  /export[?all=1]     dataset file text
//   POST /combine            {"answers":[6 booleans]} -> combined label
//   GET  /status
//   GET  /ui/...             static files when a UI directory is set
// The annotator may also be given as an X-Annotator header. Errors are JSON
// {"error","message"[,"field"]} with 400/404/409/500.
class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, std::optional<std::filesystem::path> ui_dir = {});
  ~AnnotationServer();

  // Port 0 picks a free port. Returns the bound port; Error(kBind) on failure.
  int start(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

// Annotation table from either a service log (JSON lines, latest record per
// example and annotator; the post-discussion round falls back to INITIAL) or
// a TSV of annotator<TAB>example_id<TAB>label[<TAB>round] with '#' comments.
// Throws Error(kParse) with the line number.
AnnotationTable parse_annotations(std::string_view content, Round round);

// "host:port" or ":port"; throws Error(kInvalidArgument).
std::pair<std::string, int> parse_bind_address(std::string_view address);

}  // namespace hype
