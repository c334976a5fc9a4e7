#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/grading.hpp"
#include "rubricbench/llm_client.hpp"

namespace rubricbench {

enum class SynthesisMethod : std::uint8_t { LabelsOnly, LabelsAndResponses, DiversityEnhanced };

std::string_view to_string(SynthesisMethod method);
// "labels-only", "labels-and-responses", "diversity".
std::optional<SynthesisMethod> parse_synthesis_method(std::string_view text);

struct SynthesisPlan {
  SynthesisMethod method = SynthesisMethod::LabelsAndResponses;
  LabelScheme scheme = LabelScheme::ThreeWay;
  std::map<Label, int> per_question_counts{
      {Label::Correct, 1}, {Label::PartiallyCorrect, 1}, {Label::Incorrect, 1}};
  llm::ModelConfig generation_cfg = llm::ModelConfig::generation();
  llm::ModelConfig grading_cfg = llm::ModelConfig::grading();
  int min_length_words = 5;
  int max_length_words = 128;
  std::uint64_t seed = 0;
  int cases_per_question = kDefaultCaseCount;
  // DiversityEnhanced: total generations, spread evenly over questions and
  // their cases. Unset means one generation per case.
  std::optional<std::size_t> target_total;
  // LabelsAndResponses only; DiversityEnhanced always relabels.
  bool relabel = false;
  std::string dataset_name;  // defaults to "<base>-synth"

  // Throws ValidationError on negative counts, a bad length range, or labels
  // outside the scheme.
  void validate() const;
  Json to_json() const;
};

struct QuestionSpec {
  std::string question_id;
  std::string dataset;
  std::string question_text;
  std::string model_solution;
  std::optional<std::string> rubric_text;
};

// One spec per distinct question id, in first-appearance order.
std::vector<QuestionSpec> questions_of(const Dataset& ds);

struct CaseStatement {
  std::vector<std::string> included_elements;
  Label label = Label::Incorrect;

  Json to_json() const;
};

// Element texts from the first JSON array of strings in `reply`.
std::vector<std::string> parse_element_list(std::string_view reply);

// Validates one case object against the element list and scheme.
CaseStatement parse_case_statement(const Json& item, const std::vector<std::string>& elements, LabelScheme scheme);

struct CaseParse {
  std::vector<CaseStatement> cases;
  std::size_t rejected = 0;
};

// Parses the first JSON array in `reply`; invalid cases are rejected and
// counted. Throws ValidationError when no array is present.
CaseParse parse_case_statements(std::string_view reply, const std::vector<std::string>& elements, LabelScheme scheme);

struct RelabelReport {
  std::size_t n_input = 0;
  std::size_t n_relabeled = 0;
  std::size_t n_unscored = 0;
  std::size_t n_disagreements = 0;
  std::vector<std::string> unscored_ids;

  Json to_json() const;
};

struct RelabelResult {
  Dataset dataset;
  RelabelReport report;
  std::vector<GradingRecord> records;
};

// Re-grades every sample. The grade replaces the label, the previous label
// moves to meta.original_label, and Unscored samples are dropped.
RelabelResult relabel_dataset(llm::ChatClient& client, const Dataset& ds, const llm::ModelConfig& grading_cfg,
                              const PromptMode& mode = PromptMode::rubric(), std::uint64_t seed = 0,
                              const Dataset* example_source = nullptr);

struct SynthesisResult {
  Dataset dataset;
  std::size_t n_requested = 0;
  std::size_t n_generated = 0;
  std::optional<RelabelReport> relabel;
  std::vector<std::string> skipped_questions;
  std::size_t rejected_cases = 0;

  Json to_json() const;  // counts only
};

SynthesisResult generate_labeled_responses(llm::ChatClient& client, const std::vector<QuestionSpec>& questions,
                                           const SynthesisPlan& plan);

SynthesisResult diversity_enhanced_generate(llm::ChatClient& client, const std::vector<QuestionSpec>& questions,
                                            const SynthesisPlan& plan);

// LabelsOnly relabels the Train samples of `base`; the other methods
// generate from its questions.
SynthesisResult run_synthesis(llm::ChatClient& client, const Dataset& base, const SynthesisPlan& plan);

}  // namespace rubricbench
