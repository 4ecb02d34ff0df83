#include <charconv>
#include <regex>

#include "hype/error.hpp"
#include "hype/service.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hype {
namespace {

using nlohmann::json;

struct BadRequest {
  std::string field;
  std::string message;
};

json rationales_json(const RationaleSet& set) {
  json out = json::array();
  for (Rationale r : set) out.push_back(rationale_name(r));
  return out;
}

json record_json(const AnnotationRecord& r) {
  json steps = json::array();
  for (const auto& [step, a] : r.step_answers) {
    steps.push_back({{"step", step}, {"answer", a.answer}, {"note", a.note}});
  }
  return {{"example_id", r.example_id}, {"annotator", r.annotator},
          {"label", label_name(r.label)}, {"rationales", rationales_json(r.rationales)},
          {"step_answers", steps},       {"round", round_name(r.round)},
          {"timestamp", r.timestamp},    {"revision", r.revision}};
}

json adjudication_json(const AdjudicationState& a) {
  return {{"example_id", a.example_id},
          {"status", adjudication_name(a.status)},
          {"label", a.label ? json(label_name(*a.label)) : json(nullptr)},
          {"rationales", rationales_json(a.rationales)},
          {"note", a.note},
          {"timestamp", a.timestamp}};
}

json decision_json(const GuidelineDecision& d) {
  json trace = json::array();
  for (const auto& t : d.trace) trace.push_back({{"step", t.step}, {"fired", t.fired}, {"evidence", t.evidence}});
  return {{"label", label_name(d.label)},
          {"confidence", confidence_name(d.confidence)},
          {"rationales", rationales_json(d.rationales)},
          {"trace", trace}};
}

json task_json(const Task& t) {
  const LabeledExample& ex = *t.example;
  return {{"example_id", ex.id()},
          {"sentence_id", ex.sentence.id},
          {"adjective", ex.adjective},
          {"sentence", ex.sentence.text},
          {"char_start", ex.target().start},
          {"char_end", ex.target().end},
          {"suggestion", decision_json(t.suggestion)}};
}

json agreement_json(Round round, const AgreementReport& r) {
  json kappa = json::array();
  for (const auto& row : r.kappa) {
    json out = json::array();
    for (const auto& k : row) out.push_back(k ? json(*k) : json(nullptr));
    kappa.push_back(out);
  }
  return {{"round", round_name(round)},
          {"annotators", r.annotators},
          {"kappa", kappa},
          {"disagreements", r.disagreements},
          {"overlapping", r.overlapping},
          {"disagreements_by_adjective", r.disagreements_by_adjective},
          {"unresolved", r.unresolved}};
}

template <typename T>
T get_field(const json& body, const char* name) {
  if (!body.contains(name)) throw BadRequest{name, "missing"};
  try {
    return body.at(name).get<T>();
  } catch (const json::exception&) {
    throw BadRequest{name, "wrong type"};
  }
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw BadRequest{"body", "expected a JSON object"};
  return body;
}

Label label_field(const json& body) {
  auto label = parse_label(get_field<std::string>(body, "label"));
  if (!label) throw BadRequest{"label", "expected HYPE or NOT_HYPE"};
  return *label;
}

RationaleSet rationales_field(const json& body) {
  if (!body.at("rationales").is_array()) throw BadRequest{"rationales", "expected an array"};
  RationaleSet out;
  for (const auto& v : body.at("rationales")) {
    auto r = v.is_string() ? parse_rationale(v.get<std::string>()) : std::nullopt;
    if (!r) throw BadRequest{"rationales", "unknown rationale " + v.dump()};
    out.insert(*r);
  }
  return out;
}

std::string annotator_of(const httplib::Request& req, const json* body) {
  if (body && body->contains("annotator")) return get_field<std::string>(*body, "annotator");
  if (req.has_param("annotator")) return req.get_param_value("annotator");
  if (req.has_header("X-Annotator")) return req.get_header_value("X-Annotator");
  throw BadRequest{"annotator", "missing (query, body or X-Annotator header)"};
}

Round round_param(const httplib::Request& req) {
  if (!req.has_param("round")) return Round::kInitial;
  auto round = parse_round(req.get_param_value("round"));
  if (!round) throw BadRequest{"round", "expected initial or post"};
  return *round;
}

AnnotationSubmission submission_from(const httplib::Request& req, const json& body) {
  AnnotationSubmission s;
  s.example_id = get_field<std::string>(body, "example_id");
  s.annotator = annotator_of(req, &body);
  if (body.contains("label") && !body.at("label").is_null()) s.label = label_field(body);
  if (body.contains("rationales")) s.rationales = rationales_field(body);
  if (body.contains("round")) {
    auto round = parse_round(get_field<std::string>(body, "round"));
    if (!round) throw BadRequest{"round", "expected INITIAL or POST_DISCUSSION"};
    s.round = *round;
  }
  if (body.contains("base_revision")) s.base_revision = get_field<std::uint64_t>(body, "base_revision");
  if (body.contains("step_answers")) {
    const json& steps = body.at("step_answers");
    if (!steps.is_array()) throw BadRequest{"step_answers", "expected an array"};
    for (const auto& st : steps) {
      if (!st.is_object()) throw BadRequest{"step_answers", "expected objects"};
      const int step = get_field<int>(st, "step");
      StepAnswer a;
      a.answer = get_field<bool>(st, "answer");
      if (st.contains("note")) a.note = get_field<std::string>(st, "note");
      if (!s.step_answers.emplace(step, a).second) throw BadRequest{"step_answers", "duplicate step"};
    }
  }
  return s;
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kConflict: return 409;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kParse:
    case ErrorKind::kNoOverlap: return 400;
    default: return 500;
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Error messages follow "field: text" when they concern a request field.
json error_json(const Error& e) {
  json out = {{"error", error_kind_name(e.kind())}, {"message", e.what()}};
  static const std::regex field_re(R"(^[A-Za-z]+: ([a-z_]+): )");
  std::cmatch m;
  if (std::regex_search(e.what(), m, field_re)) out["field"] = m[1].str();
  return out;
}

}  // namespace

struct AnnotationServer::Impl {
  AnnotationStore& store;
  httplib::Server server;

  explicit Impl(AnnotationStore& s) : store(s) {}

  template <typename F>
  httplib::Server::Handler wrap(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const BadRequest& b) {
        reply(res, 400, {{"error", "InvalidArgument"}, {"field", b.field}, {"message", b.field + ": " + b.message}});
      } catch (const Error& e) {
        reply(res, status_for(e.kind()), error_json(e));
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", "Internal"}, {"message", e.what()}});
      }
    };
  }

  void routes() {
    server.Get("/tasks", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::size_t limit = 20;
      if (req.has_param("limit")) {
        const std::string v = req.get_param_value("limit");
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), limit);
        if (ec != std::errc() || p != v.data() + v.size()) throw BadRequest{"limit", "expected a count"};
      }
      const Round round = round_param(req);
      json out = json::array();
      for (const auto& t : store.tasks(annotator_of(req, nullptr), round, limit)) out.push_back(task_json(t));
      reply(res, 200, out);
    }));
    server.Get("/completed", wrap([this](const httplib::Request& req, httplib::Response& res) {
      reply(res, 200, store.completed(annotator_of(req, nullptr), round_param(req)));
    }));
    server.Post("/annotations", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      reply(res, 200, record_json(store.submit(submission_from(req, body))));
    }));
    server.Get("/agreement", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const Round round = round_param(req);
      reply(res, 200, agreement_json(round, store.agreement(round)));
    }));
    server.Get("/disagreements", wrap([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& d : store.disagreements()) {
        json records = json::array();
        for (const auto& r : d.records) records.push_back(record_json(r));
        out.push_back({{"example_id", d.example_id},
                       {"adjective", d.adjective},
                       {"sentence", d.sentence},
                       {"status", "PENDING"},
                       {"records", records}});
      }
      reply(res, 200, out);
    }));
    server.Post("/adjudications", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      AdjudicationRequest r;
      r.example_id = get_field<std::string>(body, "example_id");
      auto action = parse_adjudication(get_field<std::string>(body, "action"));
      if (!action || *action == AdjudicationStatus::kPending) throw BadRequest{"action", "expected resolve or discard"};
      r.action = *action;
      if (body.contains("label") && !body.at("label").is_null()) r.label = label_field(body);
      if (body.contains("rationales")) r.rationales = rationales_field(body);
      if (body.contains("note")) r.note = get_field<std::string>(body, "note");
      reply(res, 200, adjudication_json(store.adjudicate(r)));
    }));
    server.Get("/export", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const bool all = req.has_param("all") && req.get_param_value("all") != "0";
      res.status = 200;
      res.set_content(store.export_dataset(!all), "text/plain; charset=utf-8");
    }));
    server.Post("/combine", wrap([](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const json answers = body.contains("answers") ? body.at("answers") : json();
      if (!answers.is_array() || answers.size() != 6) throw BadRequest{"answers", "expected 6 booleans"};
      std::array<bool, 6> a{};
      for (std::size_t i = 0; i < 6; ++i) {
        if (!answers[i].is_boolean()) throw BadRequest{"answers", "expected 6 booleans"};
        a[i] = answers[i].get<bool>();
      }
      const CombinedAnswer c = combine_step_answers(a);
      reply(res, 200, {{"label", label_name(c.label)}, {"rationales", rationales_json(c.rationales)}});
    }));
    server.Get("/status", wrap([this](const httplib::Request&, httplib::Response& res) {
      const StoreStatus s = store.status();
      reply(res, 200, {{"examples", s.examples}, {"open", s.open}, {"gold", s.gold}, {"pending", s.pending},
                       {"discarded", s.discarded}, {"records", s.records}, {"annotators", store.annotators()}});
    }));
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store, std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(store)) {
  impl_->routes();
  // No SO_REUSEPORT: a second service on the same port must fail to bind.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  if (ui_dir) {
    if (!std::filesystem::is_directory(*ui_dir) || !impl_->server.set_mount_point("/ui", ui_dir->string())) {
      throw Error(ErrorKind::kUnreadableFile, "UI directory " + ui_dir->string());
    }
  }
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ <= 0) throw Error(ErrorKind::kBind, "cannot bind " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw Error(ErrorKind::kBind, "cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void AnnotationServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (thread_.joinable() && thread_.get_id() != std::this_thread::get_id()) thread_.join();
}

std::pair<std::string, int> parse_bind_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos) throw Error(ErrorKind::kInvalidArgument, "bind address needs host:port");
  std::string host(address.substr(0, colon));
  if (host.empty()) host = "127.0.0.1";
  const auto port_text = address.substr(colon + 1);
  int port = -1;
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || p != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw Error(ErrorKind::kInvalidArgument, "bad port in " + std::string(address));
  }
  return {host, port};
}

}  // namespace hype
