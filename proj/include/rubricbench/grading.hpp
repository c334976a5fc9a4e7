#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/llm_client.hpp"
#include "rubricbench/prompting.hpp"

namespace rubricbench {

// One graded sample. `predicted` is empty when the sample is Unscored: no
// parseable score even after the follow-up request.
struct GradingRecord {
  std::string id;
  std::string dataset;
  std::string question_id;
  std::string mode;  // "rubric" or "k=<n>"
  LabelScheme scheme = LabelScheme::ThreeWay;
  std::string prompt_digest;
  std::string raw_reply;
  std::optional<Label> predicted;
  Label gold = Label::Incorrect;
  int attempts = 0;
  std::string response_text;
  std::optional<std::string> rubric_text;
  std::string explanation;  // filled for feedback runs

  bool scored() const { return predicted.has_value(); }

  Json to_json() const;
  static GradingRecord from_json(const Json& j, std::string_view where = "record");
};

struct GradingOptions {
  PromptMode mode = PromptMode::rubric();
  LabelScheme scheme = LabelScheme::ThreeWay;
  bool feedback = false;
  std::uint64_t seed = 0;
  // Source of few-shot examples; defaults to the graded samples' own dataset.
  const Dataset* example_source = nullptr;
};

struct GradingRun {
  std::vector<GradingRecord> records;
  std::size_t n_unscored = 0;
};

// Builds every prompt up front (so input errors surface before any request),
// then sends them with the client's bounded parallelism. Sample i draws its
// few-shot examples from Rng::derive(seed, i).
GradingRun grade_samples(llm::ChatClient& client, const llm::ModelConfig& cfg, const Dataset& ds,
                         const GradingOptions& options);

std::vector<PromptText> build_grading_prompts(const Dataset& ds, const GradingOptions& options);

std::string to_jsonl(const std::vector<GradingRecord>& records);
std::vector<GradingRecord> parse_results_jsonl(std::string_view text);
std::vector<GradingRecord> load_results(const std::filesystem::path& path);

}  // namespace rubricbench
