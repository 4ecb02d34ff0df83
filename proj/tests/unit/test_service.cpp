#include "doctest.h"

#include <algorithm>
#include <thread>

#include "httplib.h"
#include "hype/error.hpp"
#include "hype/io.hpp"
#include "hype/service.hpp"
#include "json.hpp"
#include "support/annotation_sim.hpp"
#include "support/fs.hpp"
#include "support/synthetic.hpp"

using namespace hype;
using json = nlohmann::json;

namespace {

const LexiconBundle& bundle() {
  static const LexiconBundle b = load_default_lexicon();
  return b;
}

std::vector<testing::AdjectiveCounts> small_counts() {
  return {{"novel", 4, 3, 1}, {"innovative", 3, 1, 0}};
}

LabeledDataset small_truth(std::uint64_t seed = 3) {
  return testing::synthetic_dataset(small_counts(), seed, bundle().lexicon);
}

StoreOptions fixed_clock() {
  StoreOptions o;
  o.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
  return o;
}

AnnotationSubmission labeled(const std::string& id, const std::string& who, Label label,
                             RationaleSet r = {}, std::uint64_t base = 0) {
  AnnotationSubmission s;
  s.example_id = id;
  s.annotator = who;
  s.label = label;
  s.rationales = r;
  s.base_revision = base;
  return s;
}

struct Http {
  httplib::Client client;
  explicit Http(int port) : client("127.0.0.1", port) {}

  std::pair<int, json> get(const std::string& path) {
    auto res = client.Get(path);
    REQUIRE(res);
    return {res->status, json::parse(res->body, nullptr, false)};
  }
  std::pair<int, json> post(const std::string& path, const json& body) {
    auto res = client.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    return {res->status, json::parse(res->body, nullptr, false)};
  }
  std::pair<int, json> post_raw(const std::string& path, const std::string& body) {
    auto res = client.Post(path, body, "application/json");
    REQUIRE(res);
    return {res->status, json::parse(res->body, nullptr, false)};
  }
  std::string text(const std::string& path) {
    auto res = client.Get(path);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    return res->body;
  }
};

json submission_json(const AnnotationSubmission& s) {
  json j = {{"example_id", s.example_id}, {"annotator", s.annotator}, {"round", round_name(s.round)},
            {"base_revision", s.base_revision}};
  if (s.label) j["label"] = label_name(*s.label);
  if (s.rationales) {
    j["rationales"] = json::array();
    for (Rationale r : *s.rationales) j["rationales"].push_back(rationale_name(r));
  }
  if (!s.step_answers.empty()) {
    j["step_answers"] = json::array();
    for (const auto& [step, a] : s.step_answers) {
      j["step_answers"].push_back({{"step", step}, {"answer", a.answer}, {"note", a.note}});
    }
  }
  return j;
}

json adjudication_body(const AdjudicationRequest& r) {
  json j = {{"example_id", r.example_id},
            {"action", r.action == AdjudicationStatus::kDiscarded ? "discard" : "resolve"},
            {"note", r.note}};
  if (r.label) j["label"] = label_name(*r.label);
  j["rationales"] = json::array();
  for (Rationale x : r.rationales) j["rationales"].push_back(rationale_name(x));
  return j;
}

std::vector<std::string> ids(const LabeledDataset& ds) {
  std::vector<std::string> out;
  for (const auto& ex : ds.examples) out.push_back(ex.id());
  return out;
}

}  // namespace

TEST_CASE("annotate three examples, restart, records intact") {
  testing::TempDir dir;
  const auto log = dir / "log.jsonl";
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds);
  std::vector<AnnotationRecord> before;
  {
    AnnotationStore store(ds, bundle(), log, fixed_clock());
    AnnotationServer server(store);
    Http http(server.start("127.0.0.1", 0));
    for (int i = 0; i < 3; ++i) {
      auto [status, body] = http.post("/annotations", submission_json(labeled(id[i], "A", Label::kNotHype)));
      CHECK(status == 200);
      CHECK(body["revision"] == 1);
    }
    before = store.records();
  }
  AnnotationStore again(ds, bundle(), log, fixed_clock());
  CHECK(again.records().size() == 3);
  CHECK(again.records() == before);
  CHECK(again.completed("A") == std::vector<std::string>{id[0], id[1], id[2]});
}

TEST_CASE("differing labels put an example into PENDING adjudication") {
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds)[0];
  AnnotationStore store(ds, bundle(), std::nullopt, fixed_clock());
  store.submit(labeled(id, "A", Label::kHype, {Rationale::kGratuitous}));
  CHECK(store.state(id) == ExampleState::kOpen);
  store.submit(labeled(id, "B", Label::kNotHype));
  CHECK(store.state(id) == ExampleState::kPending);
  REQUIRE(store.adjudication(id));
  CHECK(store.adjudication(id)->status == AdjudicationStatus::kPending);

  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));
  auto [status, queue] = http.get("/disagreements");
  CHECK(status == 200);
  REQUIRE(queue.size() == 1);
  CHECK(queue[0]["example_id"] == id);
  CHECK(queue[0]["records"].size() == 2);
  CHECK(queue[0]["records"][0]["annotator"] == "A");
  CHECK(queue[0]["records"][1]["label"] == "NOT_HYPE");
}

TEST_CASE("stale revision gives 409 and leaves state and log untouched") {
  testing::TempDir dir;
  const auto log = dir / "log.jsonl";
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds)[0];
  AnnotationStore store(ds, bundle(), log, fixed_clock());
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));

  CHECK(http.post("/annotations", submission_json(labeled(id, "A", Label::kNotHype))).first == 200);
  CHECK(http.post("/annotations", submission_json(labeled(id, "A", Label::kHype, {Rationale::kAmplified}, 1)))
            .first == 200);
  const std::string bytes = read_file(log);
  const auto records = store.records();
  const auto exported = store.export_dataset(false);

  for (std::uint64_t stale : {0u, 1u, 5u}) {
    auto [status, body] =
        http.post("/annotations", submission_json(labeled(id, "A", Label::kNotHype, {}, stale)));
    CHECK(status == 409);
    CHECK(body["error"] == "Conflict");
  }
  CHECK(read_file(log) == bytes);
  CHECK(store.records() == records);
  CHECK(store.export_dataset(false) == exported);
  CHECK_THROWS_AS(store.submit(labeled(id, "A", Label::kNotHype, {}, 1)), Error);
}

TEST_CASE("unanimous annotators: empty disagreement queue and kappa 1") {
  const auto truth = small_truth();
  AnnotationStore store(testing::unlabeled(truth), bundle(), std::nullopt, fixed_clock());
  testing::replay_initial_round(truth, {}, [&](const AnnotationSubmission& s) { store.submit(s); });
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));
  auto [s1, queue] = http.get("/disagreements");
  CHECK(s1 == 200);
  CHECK(queue.empty());
  auto [s2, agreement] = http.get("/agreement");
  CHECK(s2 == 200);
  CHECK(agreement["disagreements"] == 0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(agreement["kappa"][i][j].is_null());
      } else {
        CHECK(agreement["kappa"][i][j].get<double>() == 1.0);
      }
    }
  }
}

TEST_CASE("119 disagreements, 106 resolved, 13 discarded: export keeps 537 of 550") {
  const auto truth = testing::synthetic_dataset(testing::reference_counts(), 11, bundle().lexicon);
  REQUIRE(truth.examples.size() == 550);
  const auto plan = testing::plan_disagreements(truth, 106, 5);
  REQUIRE(plan.disputed.size() == 119);
  REQUIRE(plan.discarded.size() == 13);

  AnnotationStore store(testing::unlabeled(truth), bundle(), std::nullopt, fixed_clock());
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));
  testing::replay_initial_round(truth, plan, [&](const AnnotationSubmission& s) {
    CHECK(http.post("/annotations", submission_json(s)).first == 200);
  });
  auto [s1, queue] = http.get("/disagreements");
  CHECK(queue.size() == 119);
  auto [s2, agreement] = http.get("/agreement?round=initial");
  CHECK(agreement["disagreements"] == 119);
  CHECK(agreement["overlapping"] == 550);

  testing::replay_adjudication(truth, plan, [&](const AdjudicationRequest& r) {
    CHECK(http.post("/adjudications", adjudication_body(r)).first == 200);
  });
  CHECK(http.get("/disagreements").second.empty());
  auto [s3, status] = http.get("/status");
  CHECK(status["gold"] == 537);
  CHECK(status["discarded"] == 13);
  CHECK(status["pending"] == 0);

  const std::string exported = http.text("/export");
  const LabeledDataset back = parse_dataset(exported, bundle().lexicon);
  CHECK(back.examples.size() == 537);
  CHECK(exported == format_dataset(store.dataset()));

  LabeledDataset expected = truth;
  std::erase_if(expected.examples, [](const LabeledExample& e) { return e.status == Status::kDiscarded; });
  CHECK(exported == format_dataset(expected));

  const LabeledDataset all = parse_dataset(http.text("/export?all=1"), bundle().lexicon);
  CHECK(all.examples.size() == 550);
  CHECK(std::count_if(all.examples.begin(), all.examples.end(),
                      [](const LabeledExample& e) { return e.status == Status::kDiscarded; }) == 13);
}

TEST_CASE("agreement endpoint equals disagreement_breakdown over submitted labels") {
  const auto truth = small_truth(8);
  const auto ds = testing::unlabeled(truth);
  AnnotationStore store(ds, bundle(), std::nullopt, fixed_clock());
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));
  std::map<std::string, std::string> adjective_of;
  for (const auto& ex : ds.examples) adjective_of[ex.id()] = ex.adjective;

  Rng rng(21);
  AnnotationTable oracle;
  std::map<std::pair<std::string, std::string>, std::uint64_t> revision;
  const std::vector<std::string> who = {"A", "B", "C"};
  for (int step = 0; step < 60; ++step) {
    const auto& ex = ds.examples[rng.below(ds.examples.size())];
    const std::string a = who[rng.below(3)];
    const Label label = rng.below(2) ? Label::kHype : Label::kNotHype;
    const RationaleSet r = label == Label::kHype ? RationaleSet{Rationale::kGratuitous} : RationaleSet{};
    auto& rev = revision[{ex.id(), a}];
    REQUIRE(http.post("/annotations", submission_json(labeled(ex.id(), a, label, r, rev))).first == 200);
    ++rev;
    oracle[a][ex.id()] = label;

    bool overlap = false;
    std::map<std::string, int> seen;
    for (const auto& [_, m] : oracle) {
      for (const auto& [id, __] : m) overlap |= ++seen[id] >= 2;
    }
    auto [status, body] = http.get("/agreement");
    if (!overlap) {
      CHECK(status == 400);
      CHECK(body["error"] == "NoOverlap");
      continue;
    }
    REQUIRE(status == 200);
    const AgreementReport expected = disagreement_breakdown(oracle, adjective_of);
    CHECK(body["annotators"].get<std::vector<std::string>>() == expected.annotators);
    CHECK(body["disagreements"] == expected.disagreements);
    CHECK(body["overlapping"] == expected.overlapping);
    CHECK(body["unresolved"].get<std::vector<std::string>>() == expected.unresolved);
    CHECK(body["disagreements_by_adjective"].get<std::map<std::string, std::size_t>>() ==
          expected.disagreements_by_adjective);
    for (std::size_t i = 0; i < expected.kappa.size(); ++i) {
      for (std::size_t j = 0; j < expected.kappa.size(); ++j) {
        if (expected.kappa[i][j]) {
          CHECK(body["kappa"][i][j].get<double>() == *expected.kappa[i][j]);
        } else {
          CHECK(body["kappa"][i][j].is_null());
        }
      }
    }
  }
}

TEST_CASE("an example is never both queued and completed for an annotator") {
  const auto truth = small_truth(4);
  const auto ds = testing::unlabeled(truth);
  StoreOptions options = fixed_clock();
  Rng rng(2);
  for (const auto& a : options.annotators) {
    for (const auto& ex : ds.examples) {
      if (rng.below(3)) options.partition[a].insert(ex.id());
    }
  }
  AnnotationStore store(ds, bundle(), std::nullopt, options);
  auto check_views = [&] {
    for (const auto& a : options.annotators) {
      for (Round round : {Round::kInitial, Round::kPostDiscussion}) {
        const auto done = store.completed(a, round);
        std::set<std::string> done_set(done.begin(), done.end());
        for (const auto& t : store.tasks(a, round, 1000)) {
          CHECK_FALSE(done_set.count(t.example->id()));
          CHECK(options.partition[a].count(t.example->id()));
        }
      }
      std::set<std::string> seen;
      for (const auto& t : store.tasks(a, Round::kInitial, 1000)) seen.insert(t.example->id());
      for (const auto& id : store.completed(a)) seen.insert(id);
      CHECK(seen == options.partition[a]);
    }
  };
  check_views();
  for (int step = 0; step < 80; ++step) {
    const auto& a = options.annotators[rng.below(3)];
    const auto queue = store.tasks(a, Round::kInitial, 1000);
    if (queue.empty()) continue;
    const auto& ex = *queue[rng.below(queue.size())].example;
    const Label label = rng.below(2) ? Label::kHype : Label::kNotHype;
    store.submit(labeled(ex.id(), a, label,
                         label == Label::kHype ? RationaleSet{Rationale::kAmplified} : RationaleSet{}));
    check_views();
  }
  for (const auto& ex : ds.examples) {
    if (options.partition["A"].count(ex.id())) continue;
    CHECK_THROWS_AS(store.submit(labeled(ex.id(), "A", Label::kNotHype)), Error);
    break;
  }
}

TEST_CASE("same log bytes give the same state") {
  testing::TempDir dir;
  const auto truth = testing::synthetic_dataset(testing::reference_counts(), 2, bundle().lexicon);
  const auto plan = testing::plan_disagreements(truth, 30, 9);
  const auto ds = testing::unlabeled(truth);
  {
    AnnotationStore store(ds, bundle(), dir / "a.jsonl");
    testing::replay_initial_round(truth, plan, [&](const AnnotationSubmission& s) { store.submit(s); });
    std::size_t n = 0;
    testing::replay_adjudication(truth, plan, [&](const AdjudicationRequest& r) {
      if (n++ % 2 == 0) store.adjudicate(r);
    });
  }
  std::filesystem::copy_file(dir / "a.jsonl", dir / "b.jsonl");
  AnnotationStore a(ds, bundle(), dir / "a.jsonl");
  AnnotationStore b(ds, bundle(), dir / "b.jsonl");
  CHECK(a.records() == b.records());
  CHECK(a.export_dataset(false) == b.export_dataset(false));
  CHECK(a.status().gold == b.status().gold);
  CHECK(a.status().pending == b.status().pending);
  CHECK(a.status().pending > 0);
  CHECK(a.agreement(Round::kInitial).disagreements == b.agreement(Round::kInitial).disagreements);
  for (const auto& ex : ds.examples) {
    CHECK(a.state(ex.id()) == b.state(ex.id()));
    CHECK(a.adjudication(ex.id()) == b.adjudication(ex.id()));
  }
}

TEST_CASE("combine endpoint matches the combination rule on every answer vector") {
  const auto ds = testing::unlabeled(small_truth());
  AnnotationStore store(ds, bundle(), std::nullopt);
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));
  int step1_yes = 0;
  for (unsigned bits = 0; bits < 64; ++bits) {
    json answers = json::array();
    std::array<bool, 6> a{};
    for (int i = 0; i < 6; ++i) answers.push_back(a[i] = (bits >> i) & 1u);
    auto [status, body] = http.post("/combine", {{"answers", answers}});
    REQUIRE(status == 200);
    std::vector<std::string> expected_r;
    if (a[0]) {
      ++step1_yes;
      const char* names[] = {"HYPERBOLIC", "GRATUITOUS", "AMPLIFIED", "COORDINATED", "BROADER_CONTEXT"};
      for (int i = 1; i < 6; ++i) {
        if (a[i]) expected_r.push_back(names[i - 1]);
      }
    }
    CHECK(body["label"] == (expected_r.empty() ? "NOT_HYPE" : "HYPE"));
    CHECK(body["rationales"].get<std::vector<std::string>>() == expected_r);
  }
  CHECK(step1_yes == 32);
  CHECK(http.post("/combine", {{"answers", {true, false}}}).first == 400);
  CHECK(http.post("/combine", {{"answers", {1, 0, 0, 0, 0, 0}}}).first == 400);
}

TEST_CASE("step answers derive the label; contradictions are rejected") {
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds)[0];
  AnnotationStore store(ds, bundle(), std::nullopt);
  AnnotationSubmission s;
  s.example_id = id;
  s.annotator = "A";
  s.step_answers = testing::step_answers_for(Label::kHype, {Rationale::kHyperbolic, Rationale::kCoordinated});
  const auto r = store.submit(s);
  CHECK(r.label == Label::kHype);
  CHECK(r.rationales == RationaleSet{Rationale::kHyperbolic, Rationale::kCoordinated});
  CHECK(r.step_answers.size() == 6);

  s.annotator = "B";
  s.label = Label::kNotHype;
  CHECK_THROWS_AS(store.submit(s), Error);
  s.label.reset();
  s.step_answers = {{1, {true, ""}}, {2, {true, ""}}};
  CHECK_THROWS_AS(store.submit(s), Error);  // incomplete answers and no label
  s.step_answers = {{1, {false, "technical sense"}}};
  CHECK(store.submit(s).label == Label::kNotHype);
  s.annotator = "C";
  s.step_answers = {{7, {true, ""}}};
  s.label = Label::kNotHype;
  CHECK_THROWS_AS(store.submit(s), Error);
  CHECK_THROWS_AS(store.submit(labeled(id, "C", Label::kHype)), Error);  // HYPE without rationale
  CHECK_THROWS_AS(store.submit(labeled(id, "C", Label::kNotHype, {Rationale::kAmplified})), Error);
}

TEST_CASE("request validation maps to 400 with field, 404 for unknown ids") {
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds)[0];
  AnnotationStore store(ds, bundle(), std::nullopt);
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));

  auto [s1, b1] = http.post_raw("/annotations", "{not json");
  CHECK(s1 == 400);
  CHECK(b1["field"] == "body");
  auto [s2, b2] = http.post("/annotations", {{"annotator", "A"}, {"label", "HYPE"}});
  CHECK(s2 == 400);
  CHECK(b2["field"] == "example_id");
  auto [s3, b3] = http.post("/annotations", {{"example_id", id}, {"annotator", "A"}, {"label", "MAYBE"}});
  CHECK(s3 == 400);
  CHECK(b3["field"] == "label");
  auto [s4, b4] = http.post("/annotations", {{"example_id", id}, {"annotator", "A"}});
  CHECK(s4 == 400);
  CHECK(b4["field"] == "label");
  auto [s5, b5] = http.post("/annotations",
                            {{"example_id", id}, {"annotator", "A"}, {"label", "HYPE"}, {"rationales", {"LOUD"}}});
  CHECK(s5 == 400);
  CHECK(b5["field"] == "rationales");
  auto [s6, b6] = http.post("/annotations", {{"example_id", "nope@0"}, {"annotator", "A"}, {"label", "NOT_HYPE"}});
  CHECK(s6 == 404);
  auto [s7, b7] = http.post("/annotations", {{"example_id", id}, {"annotator", "Z"}, {"label", "NOT_HYPE"}});
  CHECK(s7 == 404);
  CHECK(http.get("/tasks").first == 400);
  CHECK(http.get("/tasks?annotator=Z").first == 404);
  CHECK(http.get("/tasks?annotator=A&round=later").first == 400);
  CHECK(http.get("/tasks?annotator=A&limit=x").first == 400);
  auto [s8, b8] = http.post("/adjudications", {{"example_id", id}, {"action", "shrug"}});
  CHECK(s8 == 400);
  CHECK(b8["field"] == "action");
  CHECK(http.post("/adjudications", {{"example_id", "nope@0"}, {"action", "discard"}}).first == 404);
  CHECK(http.post("/adjudications", {{"example_id", id}, {"action", "discard"}}).first == 409);  // not pending

  auto [s9, b9] = http.post("/annotations", {{"example_id", id},
                                             {"annotator", "A"},
                                             {"round", "POST_DISCUSSION"},
                                             {"label", "NOT_HYPE"}});
  CHECK(s9 == 400);
  CHECK(b9["field"] == "round");
  CHECK(store.records().empty());

  httplib::Headers headers = {{"X-Annotator", "B"}};
  auto res = http.client.Post("/annotations", headers, json{{"example_id", id}, {"label", "NOT_HYPE"}}.dump(),
                              "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["annotator"] == "B");
  auto tasks = http.client.Get("/tasks", headers);
  REQUIRE(tasks);
  CHECK(tasks->status == 200);
  CHECK(json::parse(tasks->body).size() == ds.examples.size() - 1);
}

TEST_CASE("tasks carry the engine suggestion without filling the answer") {
  const auto ds = testing::unlabeled(small_truth());
  AnnotationStore store(ds, bundle(), std::nullopt);
  AnnotationServer server(store);
  Http http(server.start("127.0.0.1", 0));
  auto [status, tasks] = http.get("/tasks?annotator=A&limit=3");
  REQUIRE(status == 200);
  REQUIRE(tasks.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& ex = ds.examples[i];
    CHECK(tasks[i]["example_id"] == ex.id());
    CHECK(ex.sentence.text.substr(tasks[i]["char_start"], tasks[i]["char_end"].get<std::size_t>() -
                                                              tasks[i]["char_start"].get<std::size_t>()) ==
          ex.target().text);
    const auto occ = find_candidates(ex.sentence, bundle().lexicon);
    const auto expected = decide(occ.at(0), ex.sentence, bundle().lexicon, bundle().resources);
    CHECK(tasks[i]["suggestion"]["label"] == label_name(expected.label));
    CHECK(tasks[i]["suggestion"]["trace"].size() == expected.trace.size());
    CHECK_FALSE(tasks[i].contains("label"));
  }
  CHECK(store.records().empty());
}

TEST_CASE("discussion round converges; discarded stays out of GOLD") {
  testing::TempDir dir;
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds);
  AnnotationStore store(ds, bundle(), dir / "log.jsonl");
  for (const auto& x : {id[0], id[1]}) {
    store.submit(labeled(x, "A", Label::kHype, {Rationale::kGratuitous}));
    store.submit(labeled(x, "B", Label::kNotHype));
    store.submit(labeled(x, "C", Label::kNotHype));
  }
  CHECK(store.tasks("A", Round::kPostDiscussion, 100).size() == 2);
  CHECK(store.agreement(Round::kInitial).disagreements == 2);

  AnnotationSubmission post = labeled(id[0], "A", Label::kNotHype);
  post.round = Round::kPostDiscussion;
  store.submit(post);
  CHECK(store.state(id[0]) == ExampleState::kGold);
  CHECK(store.agreement(Round::kPostDiscussion).disagreements == 1);
  CHECK(store.agreement(Round::kInitial).disagreements == 2);
  CHECK(store.tasks("A", Round::kPostDiscussion, 100).size() == 1);

  AdjudicationRequest discard;
  discard.example_id = id[1];
  discard.action = AdjudicationStatus::kDiscarded;
  store.adjudicate(discard);
  CHECK(store.state(id[1]) == ExampleState::kDiscarded);
  AdjudicationRequest resolve;
  resolve.example_id = id[1];
  resolve.label = Label::kNotHype;
  CHECK_THROWS_AS(store.adjudicate(resolve), Error);
  CHECK_THROWS_AS(store.submit(labeled(id[1], "A", Label::kNotHype, {}, 1)), Error);
  const auto gold = store.dataset();
  CHECK(gold.examples.size() == 1);
  CHECK(gold.examples[0].id() == id[0]);

  // A log that moves an example out of DISCARDED is refused.
  const std::string bytes = read_file(dir / "log.jsonl");
  json line = {{"type", "adjudication"}, {"example", id[1]},  {"status", "RESOLVED"}, {"label", "NOT_HYPE"},
               {"rationales", json::array()}, {"note", ""}, {"timestamp", "t"}};
  write_file(dir / "bad.jsonl", bytes + line.dump() + "\n");
  try {
    AnnotationStore bad(ds, bundle(), dir / "bad.jsonl");
    FAIL("expected CorruptLog");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCorruptLog);
    CHECK(std::string(e.what()).find("out of DISCARDED") != std::string::npos);
  }
}

TEST_CASE("corrupt logs refuse to load and name the record") {
  testing::TempDir dir;
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds);
  {
    AnnotationStore store(ds, bundle(), dir / "log.jsonl");
    store.submit(labeled(id[0], "A", Label::kNotHype));
    store.submit(labeled(id[0], "A", Label::kNotHype, {}, 1));
  }
  const auto lines = split_lines(read_file(dir / "log.jsonl"));
  REQUIRE(lines.size() >= 3);
  auto expect_corrupt = [&](const std::string& content, const std::string& needle) {
    write_file(dir / "bad.jsonl", content);
    try {
      AnnotationStore bad(ds, bundle(), dir / "bad.jsonl");
      FAIL("expected CorruptLog");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kCorruptLog);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_corrupt(lines[0] + "\n" + lines[1] + "\n{truncated\n", "line 3");
  expect_corrupt(lines[0] + "\n" + lines[2] + "\n", "revision out of sequence");
  expect_corrupt(lines[1] + "\n", "header");
  expect_corrupt(lines[0] + "\n" + lines[1] + "\n" + lines[1] + "\n", lines[1]);

  const auto other = testing::unlabeled(small_truth(99));
  CHECK_THROWS_AS(AnnotationStore(other, bundle(), dir / "log.jsonl"), Error);
}

TEST_CASE("bind errors and static UI") {
  testing::TempDir dir;
  write_file(dir / "index.html", "<html>wizard</html>");
  const auto ds = testing::unlabeled(small_truth());
  AnnotationStore store(ds, bundle(), std::nullopt);
  AnnotationServer first(store, dir.path());
  const int port = first.start("127.0.0.1", 0);
  AnnotationServer second(store);
  try {
    second.start("127.0.0.1", port);
    FAIL("expected BindError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBind);
  }
  Http http(port);
  CHECK(http.text("/ui/index.html") == "<html>wizard</html>");
  CHECK(http.client.Get("/ui/missing.html")->status == 404);
  CHECK_THROWS_AS(AnnotationServer(store, dir / "absent"), Error);

  CHECK(parse_bind_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
  CHECK(parse_bind_address(":0") == std::pair<std::string, int>{"127.0.0.1", 0});
  CHECK_THROWS_AS(parse_bind_address("localhost"), Error);
  CHECK_THROWS_AS(parse_bind_address("h:99999"), Error);
}

TEST_CASE("concurrent submissions are all logged once") {
  testing::TempDir dir;
  const auto truth = testing::synthetic_dataset(testing::reference_counts(), 6, bundle().lexicon);
  const auto ds = testing::unlabeled(truth);
  std::vector<AnnotationRecord> served;
  {
    AnnotationStore store(ds, bundle(), dir / "log.jsonl");
    AnnotationServer server(store);
    const int port = server.start("127.0.0.1", 0);
    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (const std::string who : {"A", "B", "C"}) {
      workers.emplace_back([&, who] {
        Http http(port);
        for (std::size_t i = 0; i < 60; ++i) {
          const auto s = labeled(ds.examples[i].id(), who, Label::kNotHype);
          if (http.client.Post("/annotations", submission_json(s).dump(), "application/json")->status != 200) {
            ++failures;
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    CHECK(failures == 0);
    served = store.records();
    CHECK(served.size() == 180);
    CHECK(store.status().gold == 60);
  }
  AnnotationStore replayed(ds, bundle(), dir / "log.jsonl");
  CHECK(replayed.records() == served);
}

TEST_CASE("annotation files: service log and TSV give the same table") {
  testing::TempDir dir;
  const auto ds = testing::unlabeled(small_truth());
  const auto id = ids(ds);
  {
    AnnotationStore store(ds, bundle(), dir / "log.jsonl");
    store.submit(labeled(id[0], "A", Label::kHype, {Rationale::kGratuitous}));
    store.submit(labeled(id[0], "B", Label::kNotHype));
    store.submit(labeled(id[0], "A", Label::kNotHype, {}, 1));
    store.submit(labeled(id[1], "A", Label::kNotHype));
    store.submit(labeled(id[1], "B", Label::kHype, {Rationale::kAmplified}));
    AnnotationSubmission post = labeled(id[1], "B", Label::kNotHype);
    post.round = Round::kPostDiscussion;
    store.submit(post);
    CHECK(parse_annotations(read_file(dir / "log.jsonl"), Round::kInitial) == store.annotation_table(Round::kInitial));
    CHECK(parse_annotations(read_file(dir / "log.jsonl"), Round::kPostDiscussion) ==
          store.annotation_table(Round::kPostDiscussion));
  }
  const std::string tsv = "# annotator\texample\tlabel\tround\n"
                          "A\t" + id[0] + "\tHYPE\n" +
                          "B\t" + id[0] + "\tNOT_HYPE\n" +
                          "A\t" + id[0] + "\tNOT_HYPE\n" +
                          "A\t" + id[1] + "\tNOT_HYPE\tINITIAL\n" +
                          "B\t" + id[1] + "\tHYPE\n" +
                          "B\t" + id[1] + "\tNOT_HYPE\tpost\n";
  const AnnotationTable initial = {{"A", {{id[0], Label::kNotHype}, {id[1], Label::kNotHype}}},
                                   {"B", {{id[0], Label::kNotHype}, {id[1], Label::kHype}}}};
  CHECK(parse_annotations(tsv, Round::kInitial) == initial);
  AnnotationTable post = initial;
  post["B"][id[1]] = Label::kNotHype;
  CHECK(parse_annotations(tsv, Round::kPostDiscussion) == post);
  CHECK(parse_annotations(read_file(dir / "log.jsonl"), Round::kInitial) == initial);
  try {
    parse_annotations("A\tx\tMAYBE\n", Round::kInitial);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}
