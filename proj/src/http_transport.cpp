#include "rubricbench/http_transport.hpp"

#include <httplib.h>

#include <charconv>

namespace rubricbench::llm {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("base_url must start with http:// or https://: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::optional<double> parse_retry_after(const std::string& value) {
  double seconds = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seconds);
  if (ec != std::errc{} || seconds < 0.0) return std::nullopt;
  return seconds;
}

}  // namespace

HttplibTransport::HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

HttpReply HttplibTransport::post(const HttpRequest& request) {
  const auto url = split_url(request.url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [k, v] : request.headers) {
    if (k == "Content-Type") {
      content_type = v;
    } else {
      headers.emplace(k, v);
    }
  }
  auto result = client.Post(url.path, headers, request.body, content_type);
  if (!result) throw NetworkError("POST " + request.url + ": " + httplib::to_string(result.error()));

  HttpReply reply;
  reply.status = result->status;
  reply.body = result->body;
  if (result->has_header("Retry-After")) reply.retry_after_seconds = parse_retry_after(result->get_header_value("Retry-After"));
  return reply;
}

}  // namespace rubricbench::llm
