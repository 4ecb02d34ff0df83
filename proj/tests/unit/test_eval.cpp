#include "doctest.h"

#include <cmath>
#include <set>

#include "hype/error.hpp"
#include "hype/eval.hpp"
#include "hype/io.hpp"
#include "hype/random.hpp"

using namespace hype;

namespace {

constexpr Label H = Label::kHype;
constexpr Label N = Label::kNotHype;

std::vector<Label> random_labels(Rng& rng, std::size_t n, double p_hype) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.unit() < p_hype ? H : N);
  return out;
}

// Straight from the definitions: one-vs-rest counts per class.
struct OracleMetrics {
  double accuracy, wp, wr, wf;
};

OracleMetrics oracle(const std::vector<Label>& g, const std::vector<Label>& p) {
  OracleMetrics o{0, 0, 0, 0};
  int correct = 0;
  for (std::size_t i = 0; i < g.size(); ++i) correct += g[i] == p[i];
  o.accuracy = double(correct) / double(g.size());
  for (Label c : {H, N}) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (p[i] == c && g[i] == c) ++tp;
      if (p[i] == c && g[i] != c) ++fp;
      if (p[i] != c && g[i] == c) ++fn;
    }
    const double prec = tp + fp ? double(tp) / (tp + fp) : 0.0;
    const double rec = tp + fn ? double(tp) / (tp + fn) : 0.0;
    const double f = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    const double w = double(tp + fn) / double(g.size());
    o.wp += w * prec;
    o.wr += w * rec;
    o.wf += w * f;
  }
  return o;
}

}  // namespace

TEST_CASE("majority predictions on a 79/29 test part") {
  std::vector<Label> gold(79, H);
  gold.insert(gold.end(), 29, N);
  const std::vector<Label> pred(108, H);
  const EvalReport r = evaluate(gold, pred);
  // MajorityClass on 79/29: 0.731 | 0.535 | 0.731 | 0.618
  CHECK(format_metric(r.accuracy) == "0.731");
  CHECK(format_metric(r.weighted.precision) == "0.535");
  CHECK(format_metric(r.weighted.recall) == "0.731");
  CHECK(format_metric(r.weighted.f1) == "0.618");
  CHECK(r.per_class.at(N).precision == 0.0);
  CHECK(r.warnings.size() >= 1);
  CHECK(r.warnings[0].find("NOT_HYPE precision") != std::string::npos);
  CHECK(r.confusion.at(H, H) == 79);
  CHECK(r.confusion.at(N, H) == 29);
  CHECK(r.confusion.at(H, N) == 0);
}

TEST_CASE("perfect predictions") {
  const std::vector<Label> g = {H, N, H, H, N};
  const EvalReport r = evaluate(g, g);
  CHECK(r.accuracy == 1.0);
  CHECK(r.weighted.precision == 1.0);
  CHECK(r.weighted.recall == 1.0);
  CHECK(r.weighted.f1 == 1.0);
  CHECK(r.confusion.at(H, N) == 0);
  CHECK(r.confusion.at(N, H) == 0);
  CHECK(r.warnings.empty());
}

TEST_CASE("metrics equal a per-definition recomputation") {
  Rng rng(30);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = trial == 0 ? 30 : 1 + rng.below(40);
    const auto g = random_labels(rng, n, rng.unit());
    const auto p = random_labels(rng, n, rng.unit());
    const auto r = evaluate(g, p);
    const auto o = oracle(g, p);
    CHECK(r.accuracy == doctest::Approx(o.accuracy).epsilon(1e-12));
    CHECK(r.weighted.precision == doctest::Approx(o.wp).epsilon(1e-12));
    CHECK(r.weighted.recall == doctest::Approx(o.wr).epsilon(1e-12));
    CHECK(r.weighted.f1 == doctest::Approx(o.wf).epsilon(1e-12));
    CHECK(r.confusion.total() == n);
    CHECK(r.accuracy == doctest::Approx(double(r.confusion.at(H, H) + r.confusion.at(N, N)) / n));
    // weighted recall is accuracy
    CHECK(r.weighted.recall == doctest::Approx(r.accuracy).epsilon(1e-12));
  }
}

TEST_CASE("metrics ignore example order") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    auto g = random_labels(rng, n, 0.6);
    auto p = random_labels(rng, n, 0.6);
    std::vector<std::string> adj;
    for (std::size_t i = 0; i < n; ++i) adj.push_back(rng.below(2) ? "novel" : "first");
    const auto a = evaluate(g, p, adj);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<Label> g2, p2;
    std::vector<std::string> adj2;
    for (auto i : order) {
      g2.push_back(g[i]);
      p2.push_back(p[i]);
      adj2.push_back(adj[i]);
    }
    const auto b = evaluate(g2, p2, adj2);
    CHECK(report_records(a) == report_records(b));
  }
}

TEST_CASE("per-adjective accuracy") {
  const std::vector<Label> g = {H, H, N, N, H};
  const std::vector<Label> p = {H, N, N, H, H};
  const std::vector<std::string> adj = {"novel", "novel", "first", "first", "latest"};
  const auto r = evaluate(g, p, adj);
  CHECK(r.per_adjective.at("novel").accuracy == 0.5);
  CHECK(r.per_adjective.at("first").correct == 1);
  CHECK(r.per_adjective.at("latest").accuracy == 1.0);
  CHECK(report_records(r).find("adjective.novel.accuracy\t0.5\n") != std::string::npos);
  CHECK(format_report(r).find("novel") != std::string::npos);
}

TEST_CASE("evaluate errors") {
  const std::vector<Label> a = {H, N};
  const std::vector<Label> b = {H};
  const std::vector<Label> none;
  try {
    evaluate(a, b);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kLengthMismatch);
  }
  try {
    evaluate(none, none);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyInput);
  }
  const std::vector<std::string> adj = {"novel"};
  CHECK_THROWS_AS(evaluate(a, a, adj), Error);
}

TEST_CASE("confusion records have four cells") {
  const std::vector<Label> g = {H, H, N};
  const std::vector<Label> p = {H, N, N};
  CHECK(confusion_records(evaluate(g, p).confusion) ==
        "gold\tpredicted\tcount\nHYPE\tHYPE\t1\nHYPE\tNOT_HYPE\t1\nNOT_HYPE\tHYPE\t0\nNOT_HYPE\tNOT_HYPE\t1\n");
}

TEST_CASE("kappa on hand-computed tables") {
  const std::vector<Label> mixed = {H, N, H, H, N};
  CHECK(cohen_kappa(mixed, mixed) == 1.0);
  // p_o = 0.5, p_e = 0.5*0.5 + 0.5*0.5 = 0.5
  CHECK(cohen_kappa(std::vector<Label>{H, H, N, N}, std::vector<Label>{H, N, H, N}) == 0.0);
  // p_o = 0, p_e = 0.5
  CHECK(cohen_kappa(std::vector<Label>{H, N}, std::vector<Label>{N, H}) == -1.0);
  // single shared class: p_e = 1
  CHECK(cohen_kappa(std::vector<Label>{H, H}, std::vector<Label>{H, H}) == 1.0);
}

TEST_CASE("kappa properties") {
  Rng rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    const auto a = random_labels(rng, n, rng.unit());
    const auto b = random_labels(rng, n, rng.unit());
    const double k = cohen_kappa(a, b);
    CHECK(k >= -1.0 - 1e-12);
    CHECK(k <= 1.0 + 1e-12);
    CHECK(k == cohen_kappa(b, a));
    if (std::set<Label>(a.begin(), a.end()).size() == 2) CHECK(cohen_kappa(a, a) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(cohen_kappa(std::vector<Label>{H}, std::vector<Label>{}), Error);
  CHECK_THROWS_AS(cohen_kappa(std::vector<Label>{}, std::vector<Label>{}), Error);
}

TEST_CASE("disagreement breakdown") {
  AnnotationTable t;
  std::map<std::string, std::string> adj;
  for (int i = 0; i < 6; ++i) {
    const std::string id = "e" + std::to_string(i);
    adj[id] = i < 3 ? "latest" : "novel";
    for (const char* a : {"A", "B", "C"}) t[a][id] = i % 2 ? H : N;
  }
  auto r = disagreement_breakdown(t, adj);
  CHECK(r.disagreements == 0);
  CHECK(r.disagreements_by_adjective.empty());
  CHECK(r.overlapping == 6);
  CHECK(r.annotators == std::vector<std::string>{"A", "B", "C"});
  CHECK_FALSE(r.kappa[0][0].has_value());
  CHECK(*r.kappa[0][1] == 1.0);

  t["C"]["e1"] = N;
  r = disagreement_breakdown(t, adj);
  CHECK(r.disagreements == 1);
  CHECK(r.disagreements_by_adjective == std::map<std::string, std::size_t>{{"latest", 1}});
  CHECK(r.unresolved == std::vector<std::string>{"e1"});
  CHECK(*r.kappa[0][2] == *r.kappa[2][0]);
  CHECK(format_agreement(r).find("A / C") != std::string::npos);

  AnnotationTable lonely = {{"A", {{"x", H}}}, {"B", {{"y", N}}}};
  try {
    disagreement_breakdown(lonely, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNoOverlap);
  }
}

TEST_CASE("breakdown counts equal a direct unanimity check") {
  Rng rng(33);
  const std::vector<std::string> adjectives = {"novel", "first", "unique", "latest"};
  for (int trial = 0; trial < 50; ++trial) {
    AnnotationTable t;
    std::map<std::string, std::string> adj;
    std::map<std::string, std::size_t> expected;
    std::size_t total = 0;
    for (int i = 0; i < 50; ++i) {
      const std::string id = "x" + std::to_string(i);
      adj[id] = adjectives[rng.below(adjectives.size())];
      const Label base = rng.below(2) ? H : N;
      int hype = 0;
      for (const char* a : {"A", "B", "C"}) {
        const Label l = rng.unit() < 0.1 ? (base == H ? N : H) : base;
        t[a][id] = l;
        hype += l == H;
      }
      if (hype != 0 && hype != 3) {
        ++expected[adj[id]];
        ++total;
      }
    }
    const auto r = disagreement_breakdown(t, adj);
    CHECK(r.disagreements == total);
    CHECK(r.disagreements_by_adjective == expected);
  }
}
