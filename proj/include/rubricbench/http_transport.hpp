#pragma once

#include <chrono>
#include <memory>

#include "rubricbench/llm_client.hpp"

namespace rubricbench::llm {

// HTTP(S) transport backed by cpp-httplib.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(120));

  HttpReply post(const HttpRequest& request) override;

 private:
  std::chrono::seconds timeout_;
};

}  // namespace rubricbench::llm
