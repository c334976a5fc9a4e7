#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rubricbench/llm_client.hpp"

namespace rubricbench::llm {

// One scripted reply. A 200 carries `content` (chat) or `embeddings`;
// other statuses carry `body` and optionally `retry_after`.
struct ScriptedReply {
  int status = 200;
  std::string content;
  std::string finish_reason = "stop";
  std::vector<std::vector<double>> embeddings;
  std::string body;
  std::optional<double> retry_after;
  bool network_error = false;
};

// Fixture file: JSONL, one entry per request digest:
//   {"kind": "chat"|"embeddings", "digest": "...", "request": {...},
//    "replies": [{"status": 429, "retry_after": 1}, {"status": 200, "content": "[[2]]"}]}
// A single-reply entry may use "content" or "embeddings" at top level.
// Replies are consumed in order; the last one repeats once the list is exhausted.
class ReplayFixture {
 public:
  void add_chat(const ChatRequest& req, std::string content);
  void add_chat_sequence(const ChatRequest& req, std::vector<ScriptedReply> replies);
  void add_embeddings(const EmbeddingRequest& req, std::vector<std::vector<double>> vectors);

  bool contains(const std::string& digest) const { return entries_.contains(digest); }
  std::size_t size() const { return entries_.size(); }

  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;
  static ReplayFixture load(const std::filesystem::path& path);
  static ReplayFixture parse(std::string_view text);

  struct Entry {
    std::string kind;
    Json request;
    std::vector<ScriptedReply> replies;
  };
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

// Serves recorded replies keyed by request digest; never touches the network.
class ReplayTransport : public HttpTransport {
 public:
  explicit ReplayTransport(ReplayFixture fixture);
  static std::shared_ptr<ReplayTransport> from_file(const std::filesystem::path& path);

  HttpReply post(const HttpRequest& request) override;
  bool is_remote() const override { return false; }

  std::size_t calls() const;

 private:
  ReplayFixture fixture_;
  std::map<std::string, std::size_t> cursor_;
  std::size_t calls_ = 0;
  mutable std::mutex mutex_;
};

// Forwards to another transport and appends every successful exchange to a
// fixture file, producing recordings ReplayTransport can serve.
class RecordingTransport : public HttpTransport {
 public:
  RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path fixture_path);

  HttpReply post(const HttpRequest& request) override;
  bool is_remote() const override { return inner_->is_remote(); }

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
};

}  // namespace rubricbench::llm
