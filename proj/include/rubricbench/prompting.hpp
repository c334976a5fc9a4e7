#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/error.hpp"
#include "rubricbench/label.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench {

enum class Role : std::uint8_t { System, User };

std::string_view to_string(Role role);

struct Message {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

// Chat prompt. Never empty; the first message is always the system message.
struct PromptText {
  std::vector<Message> messages;

  friend bool operator==(const PromptText&, const PromptText&) = default;
};

// Stable digest of the messages (role + content, in order).
std::string prompt_digest(const PromptText& prompt);

// Either the question's own rubric with no examples, or the generic
// label-level rubric with k graded examples per label (k in 0..5).
class PromptMode {
 public:
  static PromptMode rubric() { return PromptMode(-1); }
  static PromptMode examples(int k);

  bool is_rubric() const { return k_ < 0; }
  int k() const { return k_ < 0 ? 0 : k_; }
  std::string describe() const;  // "rubric" or "k=<k>"

  friend bool operator==(const PromptMode&, const PromptMode&) = default;

 private:
  explicit PromptMode(int k) : k_(k) {}
  int k_;
};

inline constexpr int kMaxExamplesPerLabel = 5;

// Generic per-label rubric used in example mode.
std::string_view label_level_rubric(LabelScheme scheme);

struct GradedExample {
  std::string sample_id;
  std::string response_text;
  Label label = Label::Incorrect;
};

// Few-shot examples grouped by label, most correct label first.
struct ExampleSet {
  int k = 0;
  std::vector<GradedExample> examples;
};

// Draws k examples per label of `train.scheme` from the Train samples of
// `question_id`, never picking `exclude_id`.
ExampleSet select_examples(const Dataset& train, std::string_view question_id, int k, Rng& rng,
                           std::string_view exclude_id = {});

PromptText build_grading_prompt(const LabeledSample& sample, const PromptMode& mode, LabelScheme scheme,
                                const ExampleSet& examples);

// Grading prompt that also asks for a written justification before the score.
PromptText build_feedback_prompt(const LabeledSample& sample, const std::string& rubric_text, LabelScheme scheme);

// `case_elements`, when non-empty, names the rubric elements the response
// should contain (one generation per case statement).
PromptText build_generation_prompt(std::string_view question, std::string_view model_solution,
                                   std::string_view rubric_text, Label target_label, int target_length_words,
                                   const std::vector<std::string>& case_elements = {});

PromptText build_element_list_prompt(std::string_view rubric_text);

inline constexpr int kDefaultCaseCount = 12;

PromptText build_case_statement_prompt(const std::vector<std::string>& elements, LabelScheme scheme,
                                       int n_cases = kDefaultCaseCount);

// Follow-up appended when a reply has no usable score.
inline constexpr const char* kScoreRetryInstruction = "Respond with only the bracketed score.";
// Follow-up appended when a reply has no usable JSON array.
inline constexpr const char* kJsonRetryInstruction = "Respond with only the JSON array.";

PromptText with_follow_up(PromptText prompt, std::string_view instruction);

class ScoreParseError : public ValidationError {
 public:
  enum class Kind { NoScoreFound, OutOfRange };
  ScoreParseError(Kind kind, const std::string& message) : ValidationError(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Label of the last [[<integer>]] in `text`.
Label parse_score(std::string_view text, LabelScheme scheme);

// "[[2]]" etc.
std::string render_score(Label label, LabelScheme scheme);

// Reply text with the trailing score and an "Explanation:" heading removed.
std::string extract_explanation(std::string_view reply);

// First well-formed JSON array appearing in `text`.
std::optional<Json> extract_first_json_array(std::string_view text);

}  // namespace rubricbench
