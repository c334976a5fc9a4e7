#include "rubricbench/replay.hpp"

#include <fstream>

#include "rubricbench/digest.hpp"

namespace rubricbench::llm {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

Json reply_to_json(const ScriptedReply& r, const std::string& kind) {
  Json j{{"status", r.status}};
  if (r.network_error) return Json{{"network_error", true}};
  if (r.status == 200) {
    if (kind == "embeddings") {
      j["embeddings"] = r.embeddings;
    } else {
      j["content"] = r.content;
      if (r.finish_reason != "stop") j["finish_reason"] = r.finish_reason;
    }
  } else {
    j["body"] = r.body;
    if (r.retry_after) j["retry_after"] = *r.retry_after;
  }
  return j;
}

ScriptedReply reply_from_json(const Json& j) {
  ScriptedReply r;
  if (j.value("network_error", false)) {
    r.network_error = true;
    return r;
  }
  r.status = j.value("status", 200);
  r.content = j.value("content", std::string());
  r.finish_reason = j.value("finish_reason", std::string("stop"));
  if (j.contains("embeddings")) r.embeddings = j.at("embeddings").get<std::vector<std::vector<double>>>();
  r.body = j.value("body", std::string());
  if (j.contains("retry_after")) r.retry_after = j.at("retry_after").get<double>();
  return r;
}

HttpReply to_http(const ScriptedReply& r, const std::string& kind, const std::string& model) {
  if (r.status != 200) return HttpReply{r.status, r.body, r.retry_after};
  Json body;
  if (kind == "embeddings") {
    Json data = Json::array();
    for (std::size_t i = 0; i < r.embeddings.size(); ++i) {
      data.push_back({{"object", "embedding"}, {"index", i}, {"embedding", r.embeddings[i]}});
    }
    body = Json{{"object", "list"}, {"model", model}, {"data", data}};
  } else {
    body = Json{{"object", "chat.completion"},
                {"model", model},
                {"choices",
                 Json::array({{{"index", 0},
                               {"message", {{"role", "assistant"}, {"content", r.content}}},
                               {"finish_reason", r.finish_reason}}})},
                {"usage", {{"prompt_tokens", 0}, {"completion_tokens", 0}, {"total_tokens", 0}}}};
  }
  return HttpReply{200, body.dump(), std::nullopt};
}

struct DecodedRequest {
  std::string kind;
  std::string digest;
  std::string model;
  Json request;
};

DecodedRequest decode(const HttpRequest& request) {
  auto body = Json::parse(request.body, nullptr, false);
  if (body.is_discarded()) throw TransportError("replay transport received a non-JSON request body");
  DecodedRequest d;
  if (ends_with(request.url, "/embeddings")) {
    auto req = EmbeddingRequest::from_json(body);
    d = {"embeddings", req.digest(), req.model_name, req.to_json()};
  } else if (ends_with(request.url, "/chat/completions")) {
    auto req = ChatRequest::from_json(body);
    d = {"chat", req.digest(), req.model_name, req.to_json()};
  } else {
    throw TransportError("replay transport cannot serve " + request.url);
  }
  return d;
}

}  // namespace

void ReplayFixture::add_chat(const ChatRequest& req, std::string content) {
  ScriptedReply r;
  r.content = std::move(content);
  add_chat_sequence(req, {r});
}

void ReplayFixture::add_chat_sequence(const ChatRequest& req, std::vector<ScriptedReply> replies) {
  entries_[req.digest()] = Entry{"chat", req.to_json(), std::move(replies)};
}

void ReplayFixture::add_embeddings(const EmbeddingRequest& req, std::vector<std::vector<double>> vectors) {
  ScriptedReply r;
  r.embeddings = std::move(vectors);
  entries_[req.digest()] = Entry{"embeddings", req.to_json(), {r}};
}

std::string ReplayFixture::to_jsonl() const {
  std::string out;
  for (const auto& [digest, e] : entries_) {
    Json replies = Json::array();
    for (const auto& r : e.replies) replies.push_back(reply_to_json(r, e.kind));
    out += Json{{"kind", e.kind}, {"digest", digest}, {"request", e.request}, {"replies", replies}}.dump();
    out += '\n';
  }
  return out;
}

void ReplayFixture::save(const std::filesystem::path& path) const { write_file_atomic(path, to_jsonl()); }

ReplayFixture ReplayFixture::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("replay fixture not found: " + path.string());
  return parse(read_file(path));
}

ReplayFixture ReplayFixture::parse(std::string_view text) {
  ReplayFixture f;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("digest")) {
      throw ValidationError("replay fixture line " + std::to_string(line_no) + " is malformed");
    }
    Entry e;
    e.kind = j.value("kind", std::string("chat"));
    e.request = j.value("request", Json());
    if (j.contains("replies")) {
      for (const auto& r : j.at("replies")) e.replies.push_back(reply_from_json(r));
    } else {
      e.replies.push_back(reply_from_json(j));
    }
    if (e.replies.empty()) {
      throw ValidationError("replay fixture line " + std::to_string(line_no) + " has no replies");
    }
    f.entries_[j.at("digest").get<std::string>()] = std::move(e);
  }
  return f;
}

ReplayTransport::ReplayTransport(ReplayFixture fixture) : fixture_(std::move(fixture)) {}

std::shared_ptr<ReplayTransport> ReplayTransport::from_file(const std::filesystem::path& path) {
  return std::make_shared<ReplayTransport>(ReplayFixture::load(path));
}

HttpReply ReplayTransport::post(const HttpRequest& request) {
  const auto d = decode(request);
  std::lock_guard lock(mutex_);
  ++calls_;
  auto it = fixture_.entries().find(d.digest);
  if (it == fixture_.entries().end()) {
    throw TransportError("replay fixture has no recorded reply for " + d.kind + " request " + d.digest);
  }
  const auto& replies = it->second.replies;
  auto& cursor = cursor_[d.digest];
  const auto& reply = replies[std::min(cursor, replies.size() - 1)];
  ++cursor;
  if (reply.network_error) throw NetworkError("scripted network failure");
  return to_http(reply, d.kind, d.model);
}

std::size_t ReplayTransport::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

RecordingTransport::RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path fixture_path)
    : inner_(std::move(inner)), path_(std::move(fixture_path)) {}

HttpReply RecordingTransport::post(const HttpRequest& request) {
  HttpReply reply = inner_->post(request);
  if (reply.status != 200) return reply;
  const auto d = decode(request);
  auto parsed = Json::parse(reply.body, nullptr, false);
  if (parsed.is_discarded()) return reply;
  Json entry{{"kind", d.kind}, {"digest", d.digest}, {"request", d.request}};
  if (d.kind == "embeddings") {
    entry["embeddings"] = parse_embedding_reply(parsed);
  } else {
    const auto r = parse_chat_reply(parsed);
    entry["content"] = r.content;
    entry["finish_reason"] = r.finish_reason;
  }
  std::lock_guard lock(mutex_);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  if (!out) throw TransportError("cannot append to fixture " + path_.string());
  out << entry.dump() << '\n';
  return reply;
}

}  // namespace rubricbench::llm
