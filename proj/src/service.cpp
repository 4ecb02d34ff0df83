#include "hype/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <mutex>

#include "hype/error.hpp"
#include "hype/io.hpp"
#include "json.hpp"

namespace hype {
namespace {

using nlohmann::json;

json rationales_json(const RationaleSet& set) {
  json out = json::array();
  for (Rationale r : set) out.push_back(rationale_name(r));
  return out;
}

RationaleSet rationales_from(const json& j) {
  RationaleSet out;
  for (const auto& v : j) {
    auto r = parse_rationale(v.get<std::string>());
    if (!r) throw Error(ErrorKind::kParse, "unknown rationale " + v.get<std::string>());
    out.insert(*r);
  }
  return out;
}

json annotation_line(const AnnotationRecord& r) {
  json steps = json::array();
  for (const auto& [step, a] : r.step_answers) {
    steps.push_back({{"step", step}, {"answer", a.answer}, {"note", a.note}});
  }
  return {{"type", "annotation"},
          {"example", r.example_id},
          {"annotator", r.annotator},
          {"round", round_name(r.round)},
          {"label", label_name(r.label)},
          {"rationales", rationales_json(r.rationales)},
          {"steps", steps},
          {"revision", r.revision},
          {"timestamp", r.timestamp}};
}

json adjudication_line(const AdjudicationState& a) {
  return {{"type", "adjudication"},
          {"example", a.example_id},
          {"status", adjudication_name(a.status)},
          {"label", a.label ? json(label_name(*a.label)) : json(nullptr)},
          {"rationales", rationales_json(a.rationales)},
          {"note", a.note},
          {"timestamp", a.timestamp}};
}

AnnotationRecord annotation_from(const json& j) {
  AnnotationRecord r;
  r.example_id = j.at("example").get<std::string>();
  r.annotator = j.at("annotator").get<std::string>();
  auto round = parse_round(j.at("round").get<std::string>());
  auto label = parse_label(j.at("label").get<std::string>());
  if (!round || !label) throw Error(ErrorKind::kParse, "bad round or label");
  r.round = *round;
  r.label = *label;
  r.rationales = rationales_from(j.at("rationales"));
  for (const auto& s : j.at("steps")) {
    r.step_answers[s.at("step").get<int>()] = {s.at("answer").get<bool>(), s.at("note").get<std::string>()};
  }
  r.revision = j.at("revision").get<std::uint64_t>();
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

AdjudicationState adjudication_from(const json& j) {
  AdjudicationState a;
  a.example_id = j.at("example").get<std::string>();
  auto status = parse_adjudication(j.at("status").get<std::string>());
  if (!status) throw Error(ErrorKind::kParse, "bad status");
  a.status = *status;
  if (!j.at("label").is_null()) {
    auto label = parse_label(j.at("label").get<std::string>());
    if (!label) throw Error(ErrorKind::kParse, "bad label");
    a.label = *label;
  }
  a.rationales = rationales_from(j.at("rationales"));
  a.note = j.at("note").get<std::string>();
  a.timestamp = j.at("timestamp").get<std::string>();
  return a;
}

void check_label_rationales(Label label, const RationaleSet& rationales) {
  if (label == Label::kHype && rationales.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "rationales: HYPE needs at least one rationale");
  }
  if (label == Label::kNotHype && !rationales.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "rationales: NOT_HYPE takes no rationales");
  }
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const char* round_name(Round round) {
  return round == Round::kInitial ? "INITIAL" : "POST_DISCUSSION";
}

std::optional<Round> parse_round(std::string_view name) {
  if (name == "INITIAL" || name == "initial") return Round::kInitial;
  if (name == "POST_DISCUSSION" || name == "post") return Round::kPostDiscussion;
  return std::nullopt;
}

const char* adjudication_name(AdjudicationStatus status) {
  switch (status) {
    case AdjudicationStatus::kPending: return "PENDING";
    case AdjudicationStatus::kResolved: return "RESOLVED";
    case AdjudicationStatus::kDiscarded: return "DISCARDED";
  }
  return "?";
}

std::optional<AdjudicationStatus> parse_adjudication(std::string_view name) {
  if (name == "PENDING") return AdjudicationStatus::kPending;
  if (name == "RESOLVED" || name == "resolve") return AdjudicationStatus::kResolved;
  if (name == "DISCARDED" || name == "discard") return AdjudicationStatus::kDiscarded;
  return std::nullopt;
}

const char* example_state_name(ExampleState state) {
  switch (state) {
    case ExampleState::kOpen: return "OPEN";
    case ExampleState::kGold: return "GOLD";
    case ExampleState::kPending: return "PENDING";
    case ExampleState::kDiscarded: return "DISCARDED";
  }
  return "?";
}

AnnotationStore::AnnotationStore(LabeledDataset dataset, LexiconBundle lexicon,
                                 std::optional<std::filesystem::path> log_path, StoreOptions options)
    : dataset_(std::move(dataset)), lexicon_(std::move(lexicon)), options_(std::move(options)) {
  if (options_.annotators.empty()) throw Error(ErrorKind::kInvalidArgument, "no annotators configured");
  for (std::size_t i = 0; i < dataset_.examples.size(); ++i) {
    auto& ex = dataset_.examples[i];
    if (!index_.emplace(ex.id(), i).second) {
      throw Error(ErrorKind::kDuplicateEntry, "example " + ex.id());
    }
  }
  for (const auto& [name, ids] : options_.partition) {
    if (std::find(options_.annotators.begin(), options_.annotators.end(), name) == options_.annotators.end()) {
      throw Error(ErrorKind::kInvalidArgument, "partition names unknown annotator " + name);
    }
    for (const auto& id : ids) {
      if (!index_.count(id)) throw Error(ErrorKind::kNotFound, "partition names unknown example " + id);
    }
  }
  if (!log_path) return;

  const std::string fingerprint = dataset_fingerprint(dataset_);
  const bool exists = std::filesystem::exists(*log_path) && std::filesystem::file_size(*log_path) > 0;
  if (exists) {
    const auto lines = split_lines(read_file(*log_path));
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const std::string& line = lines[n];
      if (line.empty()) continue;
      auto corrupt = [&](const std::string& why) {
        return Error(ErrorKind::kCorruptLog,
                     log_path->string() + " line " + std::to_string(n + 1) + ": " + why + ": " + line);
      };
      try {
        const json j = json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (n == 0) {
          if (type != "header") throw corrupt("first record is not a header");
          if (j.at("dataset").get<std::string>() != fingerprint) throw corrupt("log belongs to another dataset");
          continue;
        }
        if (type == "annotation") {
          AnnotationRecord r = annotation_from(j);
          const LabeledExample* ex = dataset_.find(r.example_id);
          if (!ex) throw corrupt("unknown example");
          if (!assigned(r.annotator, r.example_id)) throw corrupt("example not assigned to annotator");
          check_label_rationales(r.label, r.rationales);
          auto it = latest_.find({r.example_id, r.annotator, r.round});
          const std::uint64_t current = it == latest_.end() ? 0 : it->second.revision;
          if (r.revision != current + 1) throw corrupt("revision out of sequence");
          if (r.round == Round::kPostDiscussion && !latest_.count({r.example_id, r.annotator, Round::kInitial})) {
            throw corrupt("post-discussion record without an initial one");
          }
          apply_annotation(r);
        } else if (type == "adjudication") {
          AdjudicationState a = adjudication_from(j);
          if (!dataset_.find(a.example_id)) throw corrupt("unknown example");
          auto prev = adjudications_.find(a.example_id);
          if (prev != adjudications_.end() && prev->second.status == AdjudicationStatus::kDiscarded) {
            throw corrupt("transition out of DISCARDED");
          }
          if (a.status == AdjudicationStatus::kResolved) {
            if (!a.label) throw corrupt("RESOLVED without label");
            check_label_rationales(*a.label, a.rationales);
          }
          adjudications_[a.example_id] = std::move(a);
        } else {
          throw corrupt("unknown record type");
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kCorruptLog) throw;
        throw corrupt(e.what());
      } catch (const std::exception& e) {
        throw corrupt(e.what());
      }
    }
  }

  fd_ = ::open(log_path->c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorKind::kUnreadableFile, log_path->string() + ": " + std::strerror(errno));
  }
  if (!exists) {
    append(json{{"type", "header"}, {"version", 1}, {"dataset", fingerprint}}.dump());
  }
}

AnnotationStore::~AnnotationStore() {
  if (fd_ >= 0) ::close(fd_);
}

void AnnotationStore::append(const std::string& line) {
  if (fd_ < 0) return;
  const std::string data = line + "\n";
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kUnreadableFile, std::string("log write: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw Error(ErrorKind::kUnreadableFile, std::string("log fsync: ") + std::strerror(errno));
}

std::string AnnotationStore::now() const { return options_.clock ? options_.clock() : utc_now(); }

bool AnnotationStore::assigned(const std::string& annotator, const std::string& example_id) const {
  if (std::find(options_.annotators.begin(), options_.annotators.end(), annotator) == options_.annotators.end()) {
    return false;
  }
  if (options_.partition.empty()) return true;
  auto it = options_.partition.find(annotator);
  return it != options_.partition.end() && it->second.count(example_id) > 0;
}

std::vector<std::string> AnnotationStore::assigned_annotators(const std::string& example_id) const {
  std::vector<std::string> out;
  for (const auto& a : options_.annotators) {
    if (assigned(a, example_id)) out.push_back(a);
  }
  return out;
}

const AnnotationRecord* AnnotationStore::effective(const std::string& example, const std::string& annotator) const {
  auto post = latest_.find({example, annotator, Round::kPostDiscussion});
  if (post != latest_.end()) return &post->second;
  auto init = latest_.find({example, annotator, Round::kInitial});
  return init == latest_.end() ? nullptr : &init->second;
}

void AnnotationStore::apply_annotation(const AnnotationRecord& record) {
  latest_[{record.example_id, record.annotator, record.round}] = record;
  history_.push_back(record);
}

const LabeledExample& AnnotationStore::example_locked(std::string_view example_id) const {
  auto it = index_.find(example_id);
  if (it == index_.end()) throw Error(ErrorKind::kNotFound, "example " + std::string(example_id));
  return dataset_.examples[it->second];
}

ExampleState AnnotationStore::state_locked(const std::string& example_id) const {
  auto adj = adjudications_.find(example_id);
  if (adj != adjudications_.end()) {
    return adj->second.status == AdjudicationStatus::kDiscarded ? ExampleState::kDiscarded : ExampleState::kGold;
  }
  std::set<Label> labels;
  std::size_t labeled = 0;
  const auto annotators = assigned_annotators(example_id);
  for (const auto& a : annotators) {
    if (const auto* r = effective(example_id, a)) {
      labels.insert(r->label);
      ++labeled;
    }
  }
  if (labels.size() > 1) return ExampleState::kPending;
  if (labeled > 0 && labeled == annotators.size()) return ExampleState::kGold;
  return ExampleState::kOpen;
}

AnnotationRecord AnnotationStore::submit(const AnnotationSubmission& s) {
  std::unique_lock lock(mu_);
  example_locked(s.example_id);
  if (s.annotator.empty()) throw Error(ErrorKind::kInvalidArgument, "annotator: required");
  if (std::find(options_.annotators.begin(), options_.annotators.end(), s.annotator) == options_.annotators.end()) {
    throw Error(ErrorKind::kNotFound, "annotator " + s.annotator);
  }
  if (!assigned(s.annotator, s.example_id)) {
    throw Error(ErrorKind::kInvalidArgument, "example_id: not assigned to " + s.annotator);
  }
  for (const auto& [step, _] : s.step_answers) {
    if (step < 1 || step > 6) throw Error(ErrorKind::kInvalidArgument, "step_answers: step must be 1..6");
  }

  AnnotationRecord r;
  r.example_id = s.example_id;
  r.annotator = s.annotator;
  r.round = s.round;
  r.step_answers = s.step_answers;

  auto step1 = s.step_answers.find(1);
  const bool derivable = step1 != s.step_answers.end() &&
                         (!step1->second.answer || s.step_answers.size() == 6);
  if (derivable) {
    std::array<bool, 6> answers{};
    for (const auto& [step, a] : s.step_answers) answers[step - 1] = a.answer;
    const CombinedAnswer combined = combine_step_answers(answers);
    if (s.label && *s.label != combined.label) {
      throw Error(ErrorKind::kInvalidArgument, "label: contradicts step answers");
    }
    if (s.rationales && *s.rationales != combined.rationales) {
      throw Error(ErrorKind::kInvalidArgument, "rationales: contradict step answers");
    }
    r.label = combined.label;
    r.rationales = combined.rationales;
  } else {
    if (!s.label) throw Error(ErrorKind::kInvalidArgument, "label: required without complete step answers");
    r.label = *s.label;
    r.rationales = s.rationales.value_or(RationaleSet{});
  }
  check_label_rationales(r.label, r.rationales);

  auto it = latest_.find({s.example_id, s.annotator, s.round});
  const std::uint64_t current = it == latest_.end() ? 0 : it->second.revision;
  if (s.base_revision != current) {
    throw Error(ErrorKind::kConflict, "stale revision " + std::to_string(s.base_revision) + ", current is " +
                                          std::to_string(current));
  }
  if (s.round == Round::kPostDiscussion && !latest_.count({s.example_id, s.annotator, Round::kInitial})) {
    throw Error(ErrorKind::kInvalidArgument, "round: POST_DISCUSSION needs an INITIAL record");
  }
  auto adj = adjudications_.find(s.example_id);
  if (adj != adjudications_.end()) {
    throw Error(ErrorKind::kConflict, "example already " + std::string(adjudication_name(adj->second.status)));
  }
  r.revision = current + 1;
  r.timestamp = now();
  append(annotation_line(r).dump());
  apply_annotation(r);
  return r;
}

AdjudicationState AnnotationStore::adjudicate(const AdjudicationRequest& request) {
  std::unique_lock lock(mu_);
  example_locked(request.example_id);
  if (request.action == AdjudicationStatus::kPending) {
    throw Error(ErrorKind::kInvalidArgument, "action: must be resolve or discard");
  }
  auto prev = adjudications_.find(request.example_id);
  if (prev != adjudications_.end()) {
    throw Error(ErrorKind::kConflict, "example already " + std::string(adjudication_name(prev->second.status)));
  }
  if (state_locked(request.example_id) != ExampleState::kPending) {
    throw Error(ErrorKind::kConflict, "example " + request.example_id + " is not pending adjudication");
  }
  AdjudicationState a;
  a.example_id = request.example_id;
  a.status = request.action;
  a.note = request.note;
  if (request.action == AdjudicationStatus::kResolved) {
    if (!request.label) throw Error(ErrorKind::kInvalidArgument, "label: required to resolve");
    check_label_rationales(*request.label, request.rationales);
    a.label = request.label;
    a.rationales = request.rationales;
  } else if (request.label || !request.rationales.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "label: not allowed when discarding");
  }
  a.timestamp = now();
  append(adjudication_line(a).dump());
  adjudications_[a.example_id] = a;
  return a;
}

std::vector<Task> AnnotationStore::tasks(std::string_view annotator, Round round, std::size_t limit) const {
  std::shared_lock lock(mu_);
  const std::string who(annotator);
  if (std::find(options_.annotators.begin(), options_.annotators.end(), who) == options_.annotators.end()) {
    throw Error(ErrorKind::kNotFound, "annotator " + who);
  }
  std::vector<Task> out;
  for (const auto& ex : dataset_.examples) {
    if (out.size() >= limit) break;
    const std::string id = ex.id();
    if (!assigned(who, id) || latest_.count({id, who, round})) continue;
    if (round == Round::kInitial) {
      if (adjudications_.count(id)) continue;
    } else if (state_locked(id) != ExampleState::kPending || !latest_.count({id, who, Round::kInitial})) {
      continue;
    }
    Task t;
    t.example = &ex;
    for (const auto& occ : find_candidates(ex.sentence, lexicon_.lexicon)) {
      if (occ.token_index == ex.token_index) {
        t.suggestion = decide(occ, ex.sentence, lexicon_.lexicon, lexicon_.resources, options_.engine);
        break;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> AnnotationStore::completed(std::string_view annotator, Round round) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  const std::string who(annotator);
  for (const auto& ex : dataset_.examples) {
    const std::string id = ex.id();
    if (latest_.count({id, who, round})) out.push_back(id);
  }
  return out;
}

AnnotationTable AnnotationStore::annotation_table(Round round) const {
  std::shared_lock lock(mu_);
  AnnotationTable table;
  for (const auto& [key, record] : latest_) {
    if (key.round != Round::kInitial) continue;
    const AnnotationRecord* r = round == Round::kInitial ? &record : effective(key.example, key.annotator);
    table[key.annotator][key.example] = r->label;
  }
  return table;
}

AgreementReport AnnotationStore::agreement(Round round) const {
  const AnnotationTable table = annotation_table(round);
  std::map<std::string, std::string> adjective_of;
  {
    std::shared_lock lock(mu_);
    for (const auto& ex : dataset_.examples) adjective_of[ex.id()] = ex.adjective;
  }
  return disagreement_breakdown(table, adjective_of);
}

std::vector<Disagreement> AnnotationStore::disagreements() const {
  std::shared_lock lock(mu_);
  std::vector<Disagreement> out;
  for (const auto& ex : dataset_.examples) {
    const std::string id = ex.id();
    if (state_locked(id) != ExampleState::kPending) continue;
    Disagreement d;
    d.example_id = id;
    d.adjective = ex.adjective;
    d.sentence = ex.sentence.text;
    for (const auto& a : assigned_annotators(id)) {
      if (const auto* r = effective(id, a)) d.records.push_back(*r);
    }
    out.push_back(std::move(d));
  }
  return out;
}

ExampleState AnnotationStore::state(std::string_view example_id) const {
  std::shared_lock lock(mu_);
  example_locked(example_id);
  return state_locked(std::string(example_id));
}

std::optional<AdjudicationState> AnnotationStore::adjudication(std::string_view example_id) const {
  std::shared_lock lock(mu_);
  example_locked(example_id);
  auto it = adjudications_.find(example_id);
  if (it != adjudications_.end()) return it->second;
  if (state_locked(std::string(example_id)) == ExampleState::kPending) {
    AdjudicationState a;
    a.example_id = std::string(example_id);
    return a;
  }
  return std::nullopt;
}

std::vector<AnnotationRecord> AnnotationStore::records() const {
  std::shared_lock lock(mu_);
  return history_;
}

StoreStatus AnnotationStore::status() const {
  std::shared_lock lock(mu_);
  StoreStatus s;
  s.examples = dataset_.examples.size();
  s.records = history_.size();
  for (const auto& ex : dataset_.examples) {
    switch (state_locked(ex.id())) {
      case ExampleState::kOpen: ++s.open; break;
      case ExampleState::kGold: ++s.gold; break;
      case ExampleState::kPending: ++s.pending; break;
      case ExampleState::kDiscarded: ++s.discarded; break;
    }
  }
  return s;
}

LabeledDataset AnnotationStore::dataset(bool gold_only) const {
  std::shared_lock lock(mu_);
  LabeledDataset out;
  out.split_seed = dataset_.split_seed;
  out.comments = dataset_.comments;
  for (const auto& ex : dataset_.examples) {
    const std::string id = ex.id();
    const ExampleState st = state_locked(id);
    if (gold_only && st != ExampleState::kGold) continue;
    LabeledExample e = ex;
    e.annotators.clear();
    for (const auto& a : assigned_annotators(id)) {
      if (effective(id, a)) e.annotators.push_back(a);
    }
    e.label.reset();
    e.rationales.clear();
    switch (st) {
      case ExampleState::kGold: {
        e.status = Status::kGold;
        auto adj = adjudications_.find(id);
        if (adj != adjudications_.end()) {
          e.label = adj->second.label;
          e.rationales = adj->second.rationales;
        } else {
          for (const auto& a : e.annotators) {
            const auto* r = effective(id, a);
            e.label = r->label;
            e.rationales.insert(r->rationales.begin(), r->rationales.end());
          }
        }
        break;
      }
      case ExampleState::kDiscarded: e.status = Status::kDiscarded; break;
      default: e.status = Status::kDisputed; break;
    }
    out.examples.push_back(std::move(e));
  }
  return out;
}

AnnotationTable parse_annotations(std::string_view content, Round round) {
  const auto lines = split_lines(content);
  // (annotator, example) -> (round, revision, label)
  std::map<std::pair<std::string, std::string>, std::map<Round, std::pair<std::uint64_t, Label>>> seen;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line = trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorKind::kParse, "line " + std::to_string(n + 1) + ": " + why);
    };
    if (line[0] == '{') {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw fail("invalid JSON");
      if (j.value("type", "") != "annotation") continue;
      try {
        const AnnotationRecord r = annotation_from(j);
        auto& slot = seen[{r.annotator, r.example_id}][r.round];
        if (r.revision >= slot.first) slot = {r.revision, r.label};
      } catch (const std::exception& e) {
        throw fail(e.what());
      }
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) throw fail("expected annotator, example_id, label[, round]");
    auto label = parse_label(fields[2]);
    if (!label) throw fail("bad label " + fields[2]);
    Round r = Round::kInitial;
    if (fields.size() == 4) {
      auto parsed = parse_round(fields[3]);
      if (!parsed) throw fail("bad round " + fields[3]);
      r = *parsed;
    }
    auto& slot = seen[{fields[0], fields[1]}][r];
    slot = {slot.first + 1, *label};
  }
  AnnotationTable table;
  for (const auto& [key, rounds] : seen) {
    auto pick = rounds.end();
    if (round == Round::kPostDiscussion) pick = rounds.find(Round::kPostDiscussion);
    if (pick == rounds.end()) pick = rounds.find(Round::kInitial);
    if (pick == rounds.end()) continue;
    table[key.first][key.second] = pick->second.second;
  }
  return table;
}

std::string AnnotationStore::export_dataset(bool gold_only) const { return format_dataset(dataset(gold_only)); }

}  // namespace hype
