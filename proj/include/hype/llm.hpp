#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hype/corpus.hpp"
#include "hype/eval.hpp"

namespace hype {

struct PromptTemplate {
  std::string name;  // "BROAD", "STRICT" or a file stem
  std::string text;  // one {ADJECTIVE} and one {SENTENCE}
};

// Throws Error(kMissingPlaceholder) unless each placeholder occurs once.
PromptTemplate make_template(std::string name, std::string text);
// One trailing newline is dropped.
PromptTemplate load_template(const std::filesystem::path& path, std::string name = {});
// "BROAD" or "STRICT" from the data directory.
PromptTemplate builtin_template(std::string_view name);

// Single pass, so placeholder-like text in the inputs is kept literally.
// Throws Error(kInvalidArgument) for an empty adjective or sentence.
std::string render(const PromptTemplate& tmpl, std::string_view adjective, std::string_view sentence);

enum class Verdict { kHype, kNotHype, kUnparseable };

const char* verdict_name(Verdict v);  // "HYPE", "NOT_HYPE", "UNPARSEABLE"
std::optional<Verdict> parse_verdict(std::string_view name);

// Case-insensitive. A statement (line or sentence) made only of a decision,
// optionally after "answer:", "decision:", "output:" or "label:", is a
// standalone decision; standalone decisions that disagree give UNPARSEABLE,
// ones that agree decide. Otherwise any "not hype" wins over "hype". Neither
// gives UNPARSEABLE.
Verdict verbalize(std::string_view response);

// Plurality of parseable verdicts; a tie (including no parseable verdict)
// is UNPARSEABLE.
Verdict majority_vote(std::span<const Verdict> verdicts);

struct VoteRecord {
  std::string example_id;
  std::vector<std::string> responses;
  std::vector<Verdict> parsed;
  Verdict majority = Verdict::kUnparseable;
  std::size_t hype_votes = 0;
  std::size_t not_hype_votes = 0;
  std::size_t unparseable_votes = 0;

  std::string vote_split() const;  // e.g. "3-2-0" (HYPE-NOT_HYPE-UNPARSEABLE)
};

VoteRecord tally(std::string example_id, std::vector<std::string> responses);

// Text in, text out. Implementations must be safe to call concurrently.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  // Throws Error(kEndpoint).
  virtual std::string complete(const std::string& prompt, std::size_t sample_index) = 0;
  virtual std::string model() const = 0;
  virtual std::size_t requests() const = 0;
};

struct EndpointConfig {
  std::string url;  // http[s]://host[:port]/path
  std::string model;
  // Chat style sends {"model", "messages":[{"role":"user","content":...}]};
  // otherwise {"model", <prompt_field>: prompt}.
  bool chat = true;
  std::string prompt_field = "prompt";
  // JSON pointer to the response text.
  std::string response_pointer = "/choices/0/message/content";
  std::optional<double> temperature;  // omitted: endpoint default
  std::string token_env = "HYPE_LLM_TOKEN";  // bearer token, if set
  int max_attempts = 3;
  int backoff_ms = 200;  // doubled after each failed attempt
  int timeout_seconds = 60;
  std::size_t max_in_flight = 4;
};

// Reads a JSON object with the field names above. Throws Error(kParse).
EndpointConfig parse_endpoint_config(std::string_view json_text);
EndpointConfig load_endpoint_config(const std::filesystem::path& path);

class HttpEndpoint : public Endpoint {
 public:
  explicit HttpEndpoint(EndpointConfig config);
  std::string complete(const std::string& prompt, std::size_t sample_index) override;
  std::string model() const override { return config_.model; }
  std::size_t requests() const override;
  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  std::string scheme_host_;
  std::string path_;
  mutable std::mutex mu_;
  std::size_t requests_ = 0;
};

// Key over template text, example id, sample index and model name.
std::string cache_key(const PromptTemplate& tmpl, std::string_view example_id, std::size_t sample_index,
                      std::string_view model);

// Append-only JSONL file of responses. Throws Error(kCacheCorruption) on a
// malformed line or a key that does not match its fields.
class ResponseCache {
 public:
  ResponseCache() = default;  // in memory only
  explicit ResponseCache(std::filesystem::path path);

  std::optional<std::string> find(const std::string& key) const;
  void put(const PromptTemplate& tmpl, std::string_view example_id, std::size_t sample_index,
           std::string_view model, const std::string& response);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

struct LlmRunOptions {
  std::size_t k = 5;
  std::size_t max_in_flight = 4;
};

struct LlmRunResult {
  std::vector<VoteRecord> votes;
  // Over examples whose majority is parseable; empty when none is.
  std::optional<EvalReport> report;
  std::size_t excluded = 0;
  std::size_t requests = 0;
  std::size_t cache_hits = 0;
};

// Examples need gold labels. Errors from the endpoint abort the run after
// in-flight requests finish; responses received so far stay cached.
LlmRunResult run_eval(std::span<const LabeledExample> examples, const PromptTemplate& tmpl, Endpoint& endpoint,
                      ResponseCache& cache, const LlmRunOptions& options = {});

// One JSON object per line: id, responses, parsed, majority, split.
std::string format_votes(const std::vector<VoteRecord>& votes);

}  // namespace hype
