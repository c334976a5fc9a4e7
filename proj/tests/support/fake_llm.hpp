#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "rubricbench/llm_client.hpp"

namespace rubricbench::testing {

// Scripted stand-in for a chat/embeddings endpoint. Replies depend only on
// the request body, so recordings of it are reproducible.
//
// Grading: a score from the share of the model solution's words found in the
// answer, lowered by one level for a hash-selected quarter of (answer, number
// of graded examples) pairs. Answers containing "(vague)" get no score until the
// follow-up instruction arrives; "(garbled)" never gets one.
// Generation: a text of exactly the requested word count.
// Element lists: one element per rubric line; "[no-json]" in the rubric
// yields prose. Case statements: the requested count, cycling through the
// allowed labels, the last one naming an element outside the list.
// Embeddings: hashed bag of words plus a constant component.
class FakeLlm : public llm::HttpTransport {
 public:
  llm::HttpReply post(const llm::HttpRequest& request) override;
  bool is_remote() const override { return false; }

  std::size_t calls() const { return calls_; }

  static std::string chat_reply(const Json& body);
  static std::vector<double> embed_text(const std::string& text);

 private:
  std::atomic<std::size_t> calls_{0};
};

std::uint64_t fnv1a(std::string_view text);

}  // namespace rubricbench::testing
