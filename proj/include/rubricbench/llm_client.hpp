#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/error.hpp"
#include "rubricbench/prompting.hpp"

namespace rubricbench::llm {

inline constexpr const char* kDefaultApiKeyEnv = "RUBRICBENCH_API_KEY";
inline constexpr double kGradingTemperature = 0.0;
inline constexpr double kGenerationTemperature = 1.3;

struct ModelConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model_name = "gpt-4o-mini";
  double temperature = kGradingTemperature;
  int max_tokens = 512;
  // Name of the environment variable holding the key; the key itself is
  // never stored in a config, manifest, or cache entry.
  std::string api_key_env = kDefaultApiKeyEnv;

  static ModelConfig grading();
  static ModelConfig generation();

  Json to_json() const;
  // Missing fields keep the values of `defaults`.
  static ModelConfig from_json(const Json& j, const ModelConfig& defaults);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ChatRequest {
  std::string model_name;
  PromptText prompt;
  double temperature = 0.0;
  int max_tokens = 512;

  static ChatRequest make(const ModelConfig& cfg, PromptText prompt);

  // Wire body: {"model", "messages": [{"role","content"}], "temperature", "max_tokens"}.
  Json to_json() const;
  static ChatRequest from_json(const Json& body);
  // SHA-256 of the key-sorted wire body; identical on every platform.
  std::string digest() const;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t total_tokens = 0;
};

struct ChatResponse {
  std::string content;
  std::string finish_reason;
  Usage usage;
};

struct EmbeddingRequest {
  std::string model_name;
  std::vector<std::string> inputs;

  Json to_json() const;  // {"model", "input": [...]}
  static EmbeddingRequest from_json(const Json& body);
  std::string digest() const;
};

// ---------------------------------------------------------------------------
// HTTP layer. The client's retry logic sits above it, so a fake transport can
// inject failures.

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::optional<double> retry_after_seconds;
};

// Connection-level failure; always retried.
class NetworkError : public TransportError {
 public:
  using TransportError::TransportError;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpReply post(const HttpRequest& request) = 0;
  // Remote transports need credentials and are rate limited.
  virtual bool is_remote() const { return true; }
};

// Appends path segments to a base URL ("https://x/v1" + "chat/completions").
std::string join_url(std::string_view base, std::string_view path);

// ---------------------------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{1000};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_delay{30000};

  std::chrono::milliseconds delay_for(int retry_index) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Token bucket: `per_minute` sustained rate with a burst of `burst` requests.
class RateLimiter {
 public:
  RateLimiter(double per_minute, double burst, Sleeper sleeper);
  void acquire();

 private:
  double rate_per_second_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  Sleeper sleeper_;
  std::mutex mutex_;
};

struct ClientOptions {
  RetryPolicy retry;
  double requests_per_minute = 60.0;  // <= 0 disables rate limiting
  int max_in_flight = 8;
  std::optional<std::filesystem::path> cache_dir;
  Sleeper sleeper;  // defaults to std::this_thread::sleep_for
};

struct ClientStats {
  std::int64_t transport_calls = 0;
  std::int64_t cache_hits = 0;
  std::int64_t cache_misses = 0;
  std::int64_t retries = 0;
};

class ChatClient {
 public:
  ChatClient(std::shared_ptr<HttpTransport> transport, ClientOptions options = {});

  // POSTs to <base_url>/chat/completions with bounded retries; no cache.
  ChatResponse complete(const ModelConfig& cfg, const ChatRequest& req);

  // Serves from <cache_dir>/<model>/<d[0:2]>/<d>.json when present; stores
  // successful replies there otherwise.
  ChatResponse cached_complete(const ModelConfig& cfg, const ChatRequest& req, const std::filesystem::path& cache_dir);

  // cached_complete when the client has a cache dir, complete otherwise.
  ChatResponse chat(const ModelConfig& cfg, const ChatRequest& req);

  // Runs up to max_in_flight requests concurrently; results keep input order.
  // The first failing request (by index) is rethrown after all finish.
  std::vector<ChatResponse> chat_all(const ModelConfig& cfg, const std::vector<ChatRequest>& reqs);

  // POSTs to <base_url>/embeddings; cached like chat replies.
  std::vector<std::vector<double>> embeddings(const ModelConfig& cfg, const EmbeddingRequest& req);

  // Runs `fn(i)` for i in [0, n) with the client's in-flight bound.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

  ClientStats stats() const;
  const ClientOptions& options() const { return options_; }

  static std::filesystem::path cache_path(const std::filesystem::path& cache_dir, std::string_view model_name,
                                          std::string_view digest);

 private:
  Json post_with_retry(const ModelConfig& cfg, std::string_view endpoint, const Json& body);
  std::optional<Json> cache_read(const std::filesystem::path& path, std::string_view digest);
  void cache_write(const std::filesystem::path& path, std::string_view digest, std::string_view model,
                   const Json& request, const Json& reply);

  std::shared_ptr<HttpTransport> transport_;
  ClientOptions options_;
  std::unique_ptr<RateLimiter> limiter_;
  std::atomic<std::int64_t> transport_calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
  std::atomic<std::int64_t> cache_misses_{0};
  std::atomic<std::int64_t> retries_{0};
};

ChatResponse parse_chat_reply(const Json& reply);
std::vector<std::vector<double>> parse_embedding_reply(const Json& reply);

}  // namespace rubricbench::llm
