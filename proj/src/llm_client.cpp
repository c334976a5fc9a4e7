#include "rubricbench/llm_client.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "rubricbench/digest.hpp"
#include "rubricbench/log.hpp"

namespace rubricbench::llm {

namespace {

std::string excerpt(std::string_view body, std::size_t limit = 300) {
  if (body.size() <= limit) return std::string(body);
  return std::string(body.substr(0, limit)) + "...";
}

std::string safe_dir_name(std::string_view model) {
  std::string out;
  for (char c : model) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

Json messages_json(const PromptText& prompt) {
  Json arr = Json::array();
  for (const auto& m : prompt.messages) arr.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return arr;
}

}  // namespace

// ---------------------------------------------------------------------------

ModelConfig ModelConfig::grading() { return ModelConfig{}; }

ModelConfig ModelConfig::generation() {
  ModelConfig cfg;
  cfg.temperature = kGenerationTemperature;
  cfg.max_tokens = 400;
  return cfg;
}

Json ModelConfig::to_json() const {
  return Json{{"base_url", base_url},
              {"model_name", model_name},
              {"temperature", temperature},
              {"max_tokens", max_tokens},
              {"api_key_env", api_key_env}};
}

ModelConfig ModelConfig::from_json(const Json& j, const ModelConfig& defaults) {
  ModelConfig cfg = defaults;
  if (!j.is_object()) throw ValidationError("model config must be a JSON object");
  if (j.contains("api_key") || j.contains("key")) {
    throw ValidationError("model config must not contain an API key; name an environment variable in api_key_env");
  }
  if (auto it = j.find("base_url"); it != j.end()) cfg.base_url = it->get<std::string>();
  if (auto it = j.find("model_name"); it != j.end()) cfg.model_name = it->get<std::string>();
  if (auto it = j.find("temperature"); it != j.end()) cfg.temperature = it->get<double>();
  if (auto it = j.find("max_tokens"); it != j.end()) cfg.max_tokens = it->get<int>();
  if (auto it = j.find("api_key_env"); it != j.end()) cfg.api_key_env = it->get<std::string>();
  if (cfg.temperature < 0.0) throw ValidationError("temperature must be >= 0");
  if (cfg.max_tokens < 1) throw ValidationError("max_tokens must be >= 1");
  return cfg;
}

ChatRequest ChatRequest::make(const ModelConfig& cfg, PromptText prompt) {
  return ChatRequest{cfg.model_name, std::move(prompt), cfg.temperature, cfg.max_tokens};
}

Json ChatRequest::to_json() const {
  return Json{{"model", model_name},
              {"messages", messages_json(prompt)},
              {"temperature", temperature},
              {"max_tokens", max_tokens}};
}

ChatRequest ChatRequest::from_json(const Json& body) {
  ChatRequest req;
  req.model_name = body.at("model").get<std::string>();
  req.temperature = body.value("temperature", 0.0);
  req.max_tokens = body.value("max_tokens", 512);
  for (const auto& m : body.at("messages")) {
    const auto role = m.at("role").get<std::string>();
    req.prompt.messages.push_back({role == "system" ? Role::System : Role::User, m.at("content").get<std::string>()});
  }
  return req;
}

std::string ChatRequest::digest() const { return sha256_hex(to_json().dump()); }

Json EmbeddingRequest::to_json() const { return Json{{"model", model_name}, {"input", inputs}}; }

EmbeddingRequest EmbeddingRequest::from_json(const Json& body) {
  return EmbeddingRequest{body.at("model").get<std::string>(), body.at("input").get<std::vector<std::string>>()};
}

std::string EmbeddingRequest::digest() const { return sha256_hex(to_json().dump()); }

std::string join_url(std::string_view base, std::string_view path) {
  std::string out(base);
  while (!out.empty() && out.back() == '/') out.pop_back();
  while (!path.empty() && path.front() == '/') path.remove_prefix(1);
  return out + "/" + std::string(path);
}

// ---------------------------------------------------------------------------

std::chrono::milliseconds RetryPolicy::delay_for(int retry_index) const {
  const double ms = static_cast<double>(initial_delay.count()) * std::pow(backoff_factor, retry_index);
  return std::min(max_delay, std::chrono::milliseconds(static_cast<std::int64_t>(ms)));
}

RateLimiter::RateLimiter(double per_minute, double burst, Sleeper sleeper)
    : rate_per_second_(per_minute / 60.0),
      capacity_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(std::chrono::steady_clock::now()),
      sleeper_(std::move(sleeper)) {}

void RateLimiter::acquire() {
  double wait_seconds = 0.0;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_second_);
    // A negative balance is a reservation: the caller sleeps until its token exists.
    tokens_ -= 1.0;
    if (tokens_ < 0.0) wait_seconds = -tokens_ / rate_per_second_;
  }
  if (wait_seconds > 0.0) {
    sleeper_(std::chrono::milliseconds(static_cast<std::int64_t>(std::ceil(wait_seconds * 1000.0))));
  }
}

// ---------------------------------------------------------------------------

ChatResponse parse_chat_reply(const Json& reply) {
  try {
    const auto& choice = reply.at("choices").at(0);
    ChatResponse r;
    const auto& content = choice.at("message").at("content");
    r.content = content.is_null() ? std::string() : content.get<std::string>();
    if (auto it = choice.find("finish_reason"); it != choice.end() && it->is_string()) r.finish_reason = *it;
    if (auto it = reply.find("usage"); it != reply.end() && it->is_object()) {
      r.usage.prompt_tokens = it->value("prompt_tokens", std::int64_t{0});
      r.usage.completion_tokens = it->value("completion_tokens", std::int64_t{0});
      r.usage.total_tokens = it->value("total_tokens", std::int64_t{0});
    }
    return r;
  } catch (const Json::exception& e) {
    throw TransportError(std::string("malformed chat completion reply: ") + e.what());
  }
}

std::vector<std::vector<double>> parse_embedding_reply(const Json& reply) {
  try {
    const auto& data = reply.at("data");
    std::vector<std::vector<double>> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data.at(i);
      const std::size_t slot = item.contains("index") ? item.at("index").get<std::size_t>() : i;
      if (slot >= out.size()) throw TransportError("embedding reply index out of range");
      out[slot] = item.at("embedding").get<std::vector<double>>();
    }
    return out;
  } catch (const Json::exception& e) {
    throw TransportError(std::string("malformed embeddings reply: ") + e.what());
  }
}

ChatClient::ChatClient(std::shared_ptr<HttpTransport> transport, ClientOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!transport_) throw Error("chat client needs a transport");
  if (!options_.sleeper) options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (options_.max_in_flight < 1) options_.max_in_flight = 1;
  if (options_.retry.max_attempts < 1) options_.retry.max_attempts = 1;
  if (options_.requests_per_minute > 0.0 && transport_->is_remote()) {
    limiter_ = std::make_unique<RateLimiter>(options_.requests_per_minute,
                                             std::min<double>(options_.max_in_flight, options_.requests_per_minute),
                                             options_.sleeper);
  }
}

Json ChatClient::post_with_retry(const ModelConfig& cfg, std::string_view endpoint, const Json& body) {
  HttpRequest request;
  request.url = join_url(cfg.base_url, endpoint);
  request.body = body.dump();
  request.headers.emplace_back("Content-Type", "application/json");
  if (transport_->is_remote()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw TransportError("missing API key: environment variable " + cfg.api_key_env + " is not set");
    }
    request.headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }

  std::string last_failure;
  for (int attempt = 0; attempt < options_.retry.max_attempts; ++attempt) {
    if (attempt > 0) ++retries_;
    if (limiter_) limiter_->acquire();
    std::chrono::milliseconds delay = options_.retry.delay_for(attempt);
    try {
      ++transport_calls_;
      HttpReply reply = transport_->post(request);
      if (reply.status >= 200 && reply.status < 300) {
        auto parsed = Json::parse(reply.body, nullptr, false);
        if (parsed.is_discarded()) throw TransportError("reply from " + request.url + " is not JSON: " + excerpt(reply.body));
        return parsed;
      }
      last_failure = "HTTP " + std::to_string(reply.status) + ": " + excerpt(reply.body);
      if (reply.status == 429) {
        if (reply.retry_after_seconds) {
          delay = std::chrono::milliseconds(static_cast<std::int64_t>(std::ceil(*reply.retry_after_seconds * 1000.0)));
        }
      } else if (reply.status < 500) {
        throw TransportError("request to " + request.url + " failed with " + last_failure);
      }
    } catch (const NetworkError& e) {
      last_failure = std::string("network error: ") + e.what();
    }
    if (attempt + 1 < options_.retry.max_attempts) options_.sleeper(delay);
  }
  throw TransportError("request to " + request.url + " failed after " + std::to_string(options_.retry.max_attempts) +
                       " attempts; last error: " + last_failure);
}

ChatResponse ChatClient::complete(const ModelConfig& cfg, const ChatRequest& req) {
  return parse_chat_reply(post_with_retry(cfg, "chat/completions", req.to_json()));
}

std::filesystem::path ChatClient::cache_path(const std::filesystem::path& cache_dir, std::string_view model_name,
                                             std::string_view digest) {
  return cache_dir / safe_dir_name(model_name) / std::string(digest.substr(0, 2)) / (std::string(digest) + ".json");
}

std::optional<Json> ChatClient::cache_read(const std::filesystem::path& path, std::string_view digest) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    warn("cache entry " + path.string() + " unreadable, treating as miss: " + e.what());
    return std::nullopt;
  }
  auto entry = Json::parse(text, nullptr, false);
  if (entry.is_discarded() || !entry.is_object() || entry.value("digest", std::string()) != digest ||
      !entry.contains("reply")) {
    warn("cache entry " + path.string() + " is corrupted, treating as miss");
    return std::nullopt;
  }
  return entry.at("reply");
}

void ChatClient::cache_write(const std::filesystem::path& path, std::string_view digest, std::string_view model,
                             const Json& request, const Json& reply) {
  Json entry{{"digest", digest}, {"model", model}, {"request", request}, {"reply", reply}};
  write_file_atomic(path, entry.dump(2) + "\n");
}

ChatResponse ChatClient::cached_complete(const ModelConfig& cfg, const ChatRequest& req,
                                         const std::filesystem::path& cache_dir) {
  const auto digest = req.digest();
  const auto path = cache_path(cache_dir, req.model_name, digest);
  if (auto hit = cache_read(path, digest)) {
    try {
      auto r = parse_chat_reply(*hit);
      ++cache_hits_;
      return r;
    } catch (const TransportError&) {
      warn("cache entry " + path.string() + " holds a malformed reply, treating as miss");
    }
  }
  ++cache_misses_;
  const auto body = req.to_json();
  const auto reply = post_with_retry(cfg, "chat/completions", body);
  auto response = parse_chat_reply(reply);
  cache_write(path, digest, req.model_name, body, reply);
  return response;
}

ChatResponse ChatClient::chat(const ModelConfig& cfg, const ChatRequest& req) {
  if (options_.cache_dir) return cached_complete(cfg, req, *options_.cache_dir);
  return complete(cfg, req);
}

void ChatClient::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(options_.max_in_flight));
  std::vector<std::exception_ptr> errors(n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<ChatResponse> ChatClient::chat_all(const ModelConfig& cfg, const std::vector<ChatRequest>& reqs) {
  std::vector<ChatResponse> out(reqs.size());
  parallel_for(reqs.size(), [&](std::size_t i) { out[i] = chat(cfg, reqs[i]); });
  return out;
}

std::vector<std::vector<double>> ChatClient::embeddings(const ModelConfig& cfg, const EmbeddingRequest& req) {
  if (req.inputs.empty()) return {};
  const auto body = req.to_json();
  std::optional<std::filesystem::path> path;
  if (options_.cache_dir) {
    const auto digest = req.digest();
    path = cache_path(*options_.cache_dir, req.model_name, digest);
    if (auto hit = cache_read(*path, digest)) {
      try {
        auto vectors = parse_embedding_reply(*hit);
        ++cache_hits_;
        return vectors;
      } catch (const TransportError&) {
        warn("cache entry " + path->string() + " holds a malformed reply, treating as miss");
      }
    }
    ++cache_misses_;
  }
  const auto reply = post_with_retry(cfg, "embeddings", body);
  auto vectors = parse_embedding_reply(reply);
  if (path) cache_write(*path, req.digest(), req.model_name, body, reply);
  return vectors;
}

ClientStats ChatClient::stats() const {
  return ClientStats{transport_calls_.load(), cache_hits_.load(), cache_misses_.load(), retries_.load()};
}

}  // namespace rubricbench::llm
