#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rubricbench/grading.hpp"

namespace rubricbench {

enum class AnnotationCondition : std::uint8_t { Disagreement, AgreedPartiallyCorrect };

std::string_view to_string(AnnotationCondition condition);
// "disagreement" or "agreed-partially-correct".
std::optional<AnnotationCondition> parse_condition(std::string_view text);

struct AnnotationRow {
  std::string sample_id;
  std::string dataset;
  std::string question_id;
  std::string human_label;
  std::string llm_label;
  std::string response;
  std::string rubric;
  std::string llm_explanation;
  // Filled in by the annotator.
  std::string label_correctness;  // Human | LLM
  std::string explainability;     // Yes | No
  std::string subjectivity;       // Yes | No
};

// Fixed CSV column order.
inline constexpr std::array<const char*, 11> kAnnotationColumns = {
    "sample_id", "dataset",         "question_id",       "human_label",    "llm_label",    "response",
    "rubric",    "llm_explanation", "label_correctness", "explainability", "subjectivity",
};

struct AnnotationSheet {
  std::vector<AnnotationRow> rows;

  std::string to_csv() const;
  // Throws ValidationError when the header differs from kAnnotationColumns.
  static AnnotationSheet from_csv(std::string_view text);
};

// Uniform sample without replacement of the scored records matching
// `condition`. Throws ValidationError when fewer than n match.
AnnotationSheet sample_annotation_sheet(const std::vector<GradingRecord>& records, AnnotationCondition condition,
                                        std::size_t n, std::uint64_t seed);

struct AnnotationSummary {
  std::size_t n = 0;
  std::size_t label_human = 0;
  std::size_t label_llm = 0;
  std::size_t explainability_yes = 0;
  std::size_t explainability_no = 0;
  std::size_t subjectivity_yes = 0;
  std::size_t subjectivity_no = 0;

  double fraction(std::size_t count) const { return n ? static_cast<double>(count) / static_cast<double>(n) : 0.0; }
  Json to_json() const;
  std::string to_markdown() const;
};

// Throws ValidationError listing the ids of rows with blank or unknown
// judgment fields.
AnnotationSummary summarize_annotations(const AnnotationSheet& sheet);

}  // namespace rubricbench
