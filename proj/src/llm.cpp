#include "hype/llm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <regex>
#include <thread>

#include "hype/error.hpp"
#include "hype/io.hpp"
#include "hype/lexicon.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hype {
namespace {

using json = nlohmann::json;

constexpr std::string_view kAdjective = "{ADJECTIVE}";
constexpr std::string_view kSentence = "{SENTENCE}";

std::size_t count_of(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string_view::npos; p = text.find(needle, p + needle.size())) ++n;
  return n;
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_separator(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '_' || c == '-'; }

// Start of a "not" + separators directly before `pos`, if any.
std::optional<std::size_t> negation_before(std::string_view s, std::size_t pos) {
  std::size_t p = pos;
  while (p > 0 && is_separator(s[p - 1])) --p;
  if (p == pos && pos > 0) return std::nullopt;  // "nothype" is not accepted
  if (p < 3 || s.substr(p - 3, 3) != "not") return std::nullopt;
  if (p > 3 && is_letter(s[p - 4])) return std::nullopt;
  return p - 3;
}

struct Mentions {
  bool hype = false;
  bool not_hype = false;
};

Mentions scan(std::string_view s) {
  Mentions m;
  for (std::size_t p = s.find("hype"); p != std::string_view::npos; p = s.find("hype", p + 1)) {
    if (p > 0 && is_letter(s[p - 1])) continue;
    if (p + 4 < s.size() && is_letter(s[p + 4])) continue;
    if (negation_before(s, p)) {
      m.not_hype = true;
    } else {
      m.hype = true;
    }
  }
  return m;
}

std::string strip_decoration(std::string_view s) {
  auto junk = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || std::string_view("*\"'`:()[]{}#>,_-").find(c) != std::string_view::npos;
  };
  std::size_t b = 0, e = s.size();
  while (b < e && junk(s[b])) ++b;
  while (e > b && junk(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<Verdict> standalone(std::string_view statement) {
  std::string s = strip_decoration(statement);
  for (std::string_view prefix : {"final answer:", "answer:", "decision:", "output:", "label:"}) {
    if (s.starts_with(prefix)) {
      s = strip_decoration(std::string_view(s).substr(prefix.size()));
      break;
    }
  }
  if (s == "hype") return Verdict::kHype;
  if (s.size() > 4 && s.ends_with("hype")) {
    const auto neg = negation_before(s, s.size() - 4);
    if (neg && *neg == 0) return Verdict::kNotHype;
  }
  return std::nullopt;
}

std::string get_env(const std::string& name) {
  if (name.empty()) return {};
  const char* v = std::getenv(name.c_str());
  return v ? v : "";
}

}  // namespace

PromptTemplate make_template(std::string name, std::string text) {
  for (auto ph : {kAdjective, kSentence}) {
    const auto n = count_of(text, ph);
    if (n != 1) {
      throw Error(ErrorKind::kMissingPlaceholder, "template '" + name + "' has " + std::to_string(n) + " " +
                                                      std::string(ph) + " placeholders, expected 1");
    }
  }
  return PromptTemplate{std::move(name), std::move(text)};
}

PromptTemplate load_template(const std::filesystem::path& path, std::string name) {
  std::string text = read_file(path);
  if (text.ends_with('\n')) text.pop_back();
  if (name.empty()) name = path.stem().string();
  return make_template(std::move(name), std::move(text));
}

PromptTemplate builtin_template(std::string_view name) {
  if (name == "BROAD") return load_template(default_data_dir() / "prompt_broad.txt", "BROAD");
  if (name == "STRICT") return load_template(default_data_dir() / "prompt_strict.txt", "STRICT");
  throw Error(ErrorKind::kInvalidArgument, "unknown template '" + std::string(name) + "' (BROAD or STRICT)");
}

std::string render(const PromptTemplate& tmpl, std::string_view adjective, std::string_view sentence) {
  if (adjective.empty()) throw Error(ErrorKind::kInvalidArgument, "empty adjective");
  if (sentence.empty()) throw Error(ErrorKind::kInvalidArgument, "empty sentence");
  const auto pa = tmpl.text.find(kAdjective);
  const auto ps = tmpl.text.find(kSentence);
  if (pa == std::string::npos || ps == std::string::npos) {
    throw Error(ErrorKind::kMissingPlaceholder, "template '" + tmpl.name + "' lacks a placeholder");
  }
  const std::string_view t = tmpl.text;
  auto first = std::min(pa, ps), second = std::max(pa, ps);
  auto value = [&](std::size_t pos) { return pos == pa ? adjective : sentence; };
  auto width = [&](std::size_t pos) { return pos == pa ? kAdjective.size() : kSentence.size(); };
  std::string out;
  out.append(t.substr(0, first));
  out.append(value(first));
  out.append(t.substr(first + width(first), second - first - width(first)));
  out.append(value(second));
  out.append(t.substr(second + width(second)));
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHype: return "HYPE";
    case Verdict::kNotHype: return "NOT_HYPE";
    case Verdict::kUnparseable: return "UNPARSEABLE";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view name) {
  for (auto v : {Verdict::kHype, Verdict::kNotHype, Verdict::kUnparseable}) {
    if (name == verdict_name(v)) return v;
  }
  return std::nullopt;
}

Verdict verbalize(std::string_view response) {
  const std::string s = casefold(response);
  bool saw[2] = {false, false};
  std::size_t b = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || std::string_view("\n.!?;").find(s[i]) != std::string_view::npos) {
      if (auto v = standalone(std::string_view(s).substr(b, i - b))) saw[*v == Verdict::kHype ? 0 : 1] = true;
      b = i + 1;
    }
  }
  if (saw[0] && saw[1]) return Verdict::kUnparseable;
  if (saw[0]) return Verdict::kHype;
  if (saw[1]) return Verdict::kNotHype;
  const Mentions m = scan(s);
  if (m.not_hype) return Verdict::kNotHype;
  if (m.hype) return Verdict::kHype;
  return Verdict::kUnparseable;
}

Verdict majority_vote(std::span<const Verdict> verdicts) {
  std::size_t h = 0, n = 0;
  for (Verdict v : verdicts) {
    h += v == Verdict::kHype;
    n += v == Verdict::kNotHype;
  }
  if (h > n) return Verdict::kHype;
  if (n > h) return Verdict::kNotHype;
  return Verdict::kUnparseable;
}

std::string VoteRecord::vote_split() const {
  return std::to_string(hype_votes) + "-" + std::to_string(not_hype_votes) + "-" + std::to_string(unparseable_votes);
}

VoteRecord tally(std::string example_id, std::vector<std::string> responses) {
  VoteRecord r;
  r.example_id = std::move(example_id);
  r.responses = std::move(responses);
  for (const auto& text : r.responses) {
    const Verdict v = verbalize(text);
    r.parsed.push_back(v);
    r.hype_votes += v == Verdict::kHype;
    r.not_hype_votes += v == Verdict::kNotHype;
    r.unparseable_votes += v == Verdict::kUnparseable;
  }
  r.majority = majority_vote(r.parsed);
  return r;
}

EndpointConfig parse_endpoint_config(std::string_view text) {
  EndpointConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::kParse, "endpoint config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "url") c.url = value.get<std::string>();
      else if (key == "model") c.model = value.get<std::string>();
      else if (key == "chat") c.chat = value.get<bool>();
      else if (key == "prompt_field") c.prompt_field = value.get<std::string>();
      else if (key == "response_pointer") c.response_pointer = value.get<std::string>();
      else if (key == "temperature") c.temperature = value.get<double>();
      else if (key == "token_env") c.token_env = value.get<std::string>();
      else if (key == "max_attempts") c.max_attempts = value.get<int>();
      else if (key == "backoff_ms") c.backoff_ms = value.get<int>();
      else if (key == "timeout_seconds") c.timeout_seconds = value.get<int>();
      else if (key == "max_in_flight") c.max_in_flight = value.get<std::size_t>();
      else throw Error(ErrorKind::kParse, "unknown endpoint config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("endpoint config: ") + e.what());
  }
  if (c.url.empty()) throw Error(ErrorKind::kParse, "endpoint config needs a url");
  if (c.max_attempts < 1 || c.max_in_flight < 1) {
    throw Error(ErrorKind::kParse, "max_attempts and max_in_flight must be >= 1");
  }
  return c;
}

EndpointConfig load_endpoint_config(const std::filesystem::path& path) {
  return parse_endpoint_config(read_file(path));
}

HttpEndpoint::HttpEndpoint(EndpointConfig config) : config_(std::move(config)) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, url)) {
    throw Error(ErrorKind::kInvalidArgument, "bad endpoint url '" + config_.url + "'");
  }
  scheme_host_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/";
}

std::size_t HttpEndpoint::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::string HttpEndpoint::complete(const std::string& prompt, std::size_t /*sample_index*/) {
  json body;
  if (!config_.model.empty()) body["model"] = config_.model;
  if (config_.chat) {
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  } else {
    body[config_.prompt_field] = prompt;
  }
  if (config_.temperature) body["temperature"] = *config_.temperature;
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (const auto token = get_env(config_.token_env); !token.empty()) {
    headers.emplace("Authorization", "Bearer " + token);
  }
  std::string last_error;
  int backoff = config_.backoff_ms;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    {
      std::lock_guard lock(mu_);
      ++requests_;
    }
    httplib::Client client(scheme_host_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    try {
      const json reply = json::parse(res->body);
      const json& text = reply.at(json::json_pointer(config_.response_pointer));
      if (!text.is_string()) throw std::runtime_error("response field is not a string");
      return text.get<std::string>();
    } catch (const std::exception& e) {
      last_error = std::string("bad response body: ") + e.what();
    }
  }
  throw Error(ErrorKind::kEndpoint, config_.url + " failed after " + std::to_string(config_.max_attempts) +
                                        " attempts: " + last_error);
}

std::string cache_key(const PromptTemplate& tmpl, std::string_view example_id, std::size_t sample_index,
                      std::string_view model) {
  std::string material = sha256_hex(tmpl.text);
  material += '\x1f';
  material += example_id;
  material += '\x1f';
  material += std::to_string(sample_index);
  material += '\x1f';
  material += model;
  return sha256_hex(material);
}

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(*path_)) return;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(read_file(*path_))) {
    ++line_no;
    if (line.empty()) continue;
    auto corrupt = [&](const std::string& why) {
      return Error(ErrorKind::kCacheCorruption, path_->string() + " line " + std::to_string(line_no) + ": " + why);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw corrupt("not JSON");
    }
    try {
      const std::string key = j.at("key").get<std::string>();
      std::string material = j.at("template_sha256").get<std::string>();
      material += '\x1f' + j.at("example").get<std::string>() + '\x1f' +
                  std::to_string(j.at("sample").get<std::size_t>()) + '\x1f' + j.at("model").get<std::string>();
      if (sha256_hex(material) != key) throw corrupt("key does not match fields");
      entries_[key] = j.at("response").get<std::string>();
    } catch (const json::exception& e) {
      throw corrupt(e.what());
    }
  }
}

std::optional<std::string> ResponseCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const PromptTemplate& tmpl, std::string_view example_id, std::size_t sample_index,
                        std::string_view model, const std::string& response) {
  const std::string key = cache_key(tmpl, example_id, sample_index, model);
  std::lock_guard lock(mu_);
  if (path_) {
    json j = {{"key", key},
              {"template_sha256", sha256_hex(tmpl.text)},
              {"template", tmpl.name},
              {"example", example_id},
              {"sample", sample_index},
              {"model", model},
              {"response", response}};
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::kUnreadableFile, "cannot append to " + path_->string());
  }
  entries_[key] = response;
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

LlmRunResult run_eval(std::span<const LabeledExample> examples, const PromptTemplate& tmpl, Endpoint& endpoint,
                      ResponseCache& cache, const LlmRunOptions& options) {
  if (options.k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  for (const auto& ex : examples) {
    if (!ex.label) throw Error(ErrorKind::kInvalidArgument, "example " + ex.id() + " has no gold label");
  }
  const std::size_t before = endpoint.requests();
  const std::string model = endpoint.model();
  std::vector<std::vector<std::string>> responses(examples.size(), std::vector<std::string>(options.k));
  struct Job {
    std::size_t example, sample;
    std::string prompt;
  };
  std::vector<Job> jobs;
  LlmRunResult result;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const std::string id = examples[i].id();
    const std::string prompt = render(tmpl, examples[i].adjective, examples[i].sentence.text);
    for (std::size_t s = 0; s < options.k; ++s) {
      if (auto hit = cache.find(cache_key(tmpl, id, s, model))) {
        responses[i][s] = *hit;
        ++result.cache_hits;
      } else {
        jobs.push_back({i, s, prompt});
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (!failed) {
      const std::size_t j = next++;
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      try {
        std::string text = endpoint.complete(job.prompt, job.sample);
        cache.put(tmpl, examples[job.example].id(), job.sample, model, text);
        responses[job.example][job.sample] = std::move(text);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(options.max_in_flight, 1), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<Label> gold, predicted;
  std::vector<std::string> adjectives;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    VoteRecord v = tally(examples[i].id(), std::move(responses[i]));
    if (v.majority == Verdict::kUnparseable) {
      ++result.excluded;
    } else {
      gold.push_back(*examples[i].label);
      predicted.push_back(v.majority == Verdict::kHype ? Label::kHype : Label::kNotHype);
      adjectives.push_back(examples[i].adjective);
    }
    result.votes.push_back(std::move(v));
  }
  if (!gold.empty()) {
    result.report = evaluate(gold, predicted, adjectives);
    result.report->hyperparameters = "template=" + tmpl.name + ",k=" + std::to_string(options.k) +
                                     ",model=" + (model.empty() ? "-" : model) +
                                     ",excluded=" + std::to_string(result.excluded);
  }
  result.requests = endpoint.requests() - before;
  return result;
}

std::string format_votes(const std::vector<VoteRecord>& votes) {
  std::string out;
  for (const auto& v : votes) {
    json parsed = json::array();
    for (Verdict p : v.parsed) parsed.push_back(verdict_name(p));
    json j = {{"id", v.example_id},
              {"responses", v.responses},
              {"parsed", parsed},
              {"majority", verdict_name(v.majority)},
              {"split", v.vote_split()}};
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace hype
