#include "rubricbench/prompting.hpp"

#include <algorithm>
#include <charconv>

#include "rubricbench/digest.hpp"
#include "rubricbench/templates.hpp"

namespace rubricbench {

namespace {

std::string flatten(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == '\n' || c == '\r') {
      pending_space = true;
      continue;
    }
    if (pending_space) {
      if (!out.empty() && out.back() != ' ' && c != ' ') out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string score_criteria(LabelScheme scheme) {
  if (scheme == LabelScheme::TwoWay) {
    return "   - Correct (C): 1 point\n"
           "   - Incorrect (I): 0 points";
  }
  return "   - Correct (C): 2 points\n"
         "   - Partially Correct But Incomplete (P): 1 point\n"
         "   - Incorrect (I): 0 points";
}

std::string score_examples(LabelScheme scheme) {
  std::string out;
  for (Label label : labels_of(scheme)) {
    if (!out.empty()) out += '\n';
    out += "   - " + std::string(display_name(label)) + ": " + render_score(label, scheme);
  }
  return out;
}

struct ScoreMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string_view digits;
};

std::vector<ScoreMatch> find_scores(std::string_view text) {
  std::vector<ScoreMatch> out;
  std::size_t pos = 0;
  while ((pos = text.find("[[", pos)) != std::string_view::npos) {
    std::size_t i = pos + 2;
    while (i < text.size() && text[i] == ' ') ++i;
    const std::size_t num_begin = i;
    if (i < text.size() && text[i] == '-') ++i;
    const std::size_t digit_begin = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    const std::size_t num_end = i;
    while (i < text.size() && text[i] == ' ') ++i;
    if (num_end > digit_begin && text.substr(i, 2) == "]]") {
      out.push_back({pos, i + 2, text.substr(num_begin, num_end - num_begin)});
      pos = i + 2;
    } else {
      pos += 1;
    }
  }
  return out;
}

PromptText grading_prompt(const LabeledSample& sample, std::string_view rubric, std::string graded_examples,
                          LabelScheme scheme, std::string_view response_format_template) {
  PromptText p;
  p.messages.push_back({Role::System, std::string(templates::get("grading_context_v1"))});
  p.messages.push_back({Role::User, templates::render(templates::get("grading_user_v1"),
                                                      {
                                                          {"question", sample.question_text},
                                                          {"model_solution", sample.model_solution},
                                                          {"rubric", std::string(rubric)},
                                                          {"student_answer", sample.response_text},
                                                          {"graded_examples", std::move(graded_examples)},
                                                          {"score_criteria", score_criteria(scheme)},
                                                          {"response_format",
                                                           std::string(templates::get(response_format_template))},
                                                          {"score_examples", score_examples(scheme)},
                                                      })});
  return p;
}

}  // namespace

std::string_view label_level_rubric(LabelScheme scheme) {
  return templates::get(scheme == LabelScheme::TwoWay ? "label_level_rubric_2way_v1" : "label_level_rubric_3way_v1");
}

std::string_view to_string(Role role) { return role == Role::System ? "system" : "user"; }

std::string prompt_digest(const PromptText& prompt) {
  Json arr = Json::array();
  for (const auto& m : prompt.messages) arr.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return sha256_hex(arr.dump());
}

PromptMode PromptMode::examples(int k) {
  if (k < 0 || k > kMaxExamplesPerLabel) {
    throw ValidationError("examples per label must lie in 0..5 (got " + std::to_string(k) + ")");
  }
  return PromptMode(k);
}

std::string PromptMode::describe() const { return is_rubric() ? "rubric" : "k=" + std::to_string(k_); }

ExampleSet select_examples(const Dataset& train, std::string_view question_id, int k, Rng& rng,
                           std::string_view exclude_id) {
  if (k < 0 || k > kMaxExamplesPerLabel) {
    throw ValidationError("examples per label must lie in 0..5 (got " + std::to_string(k) + ")");
  }
  ExampleSet set;
  set.k = k;
  if (k == 0) return set;
  for (Label label : labels_of(train.scheme)) {
    std::vector<const LabeledSample*> pool;
    for (const auto& s : train.samples) {
      if (s.split == Split::Train && s.question_id == question_id && s.label == label && s.id != exclude_id) {
        pool.push_back(&s);
      }
    }
    if (pool.size() < static_cast<std::size_t>(k)) {
      throw ValidationError("question '" + std::string(question_id) + "' has only " + std::to_string(pool.size()) +
                            " train samples labeled " + std::string(to_string(label)) + "; " + std::to_string(k) +
                            " requested");
    }
    for (std::size_t idx : rng.sample_indices(pool.size(), static_cast<std::size_t>(k))) {
      set.examples.push_back({pool[idx]->id, pool[idx]->response_text, label});
    }
  }
  return set;
}

PromptText build_grading_prompt(const LabeledSample& sample, const PromptMode& mode, LabelScheme scheme,
                                const ExampleSet& examples) {
  if (mode.is_rubric()) {
    if (!sample.rubric_text) {
      throw ValidationError("rubric mode needs a rubric, but question '" + sample.question_id + "' (sample '" +
                            sample.id + "') has none");
    }
    return grading_prompt(sample, *sample.rubric_text, "", scheme, "response_format_score_only_v1");
  }

  const auto n_labels = labels_of(scheme).size();
  if (examples.k != mode.k() || examples.examples.size() != n_labels * static_cast<std::size_t>(mode.k())) {
    throw ValidationError("example set does not hold " + std::to_string(mode.k()) + " examples per label");
  }
  std::string section = "- Graded Examples:\n";
  if (examples.examples.empty()) {
    section += "(none)\n";
  }
  for (std::size_t i = 0; i < examples.examples.size(); ++i) {
    const auto& ex = examples.examples[i];
    if (ex.sample_id == sample.id) throw ValidationError("example set contains the sample under evaluation");
    section += "Example " + std::to_string(i + 1) + " (" + std::string(display_name(ex.label)) +
               "): " + flatten(ex.response_text) + '\n';
  }
  return grading_prompt(sample, label_level_rubric(scheme), std::move(section), scheme,
                        "response_format_score_only_v1");
}

PromptText build_feedback_prompt(const LabeledSample& sample, const std::string& rubric_text, LabelScheme scheme) {
  if (trim(rubric_text).empty()) {
    throw ValidationError("feedback prompt for sample '" + sample.id + "' needs a rubric");
  }
  return grading_prompt(sample, rubric_text, "", scheme, "response_format_feedback_v1");
}

PromptText build_generation_prompt(std::string_view question, std::string_view model_solution,
                                   std::string_view rubric_text, Label target_label, int target_length_words,
                                   const std::vector<std::string>& case_elements) {
  if (target_length_words < 1) throw ValidationError("target length must be at least one word");
  std::string elements;
  if (!case_elements.empty()) {
    elements = "The response should contain exactly these rubric elements:\n";
    for (const auto& e : case_elements) elements += "- " + e + '\n';
  }
  PromptText p;
  p.messages.push_back({Role::System, std::string(templates::get("generation_system_v1"))});
  p.messages.push_back({Role::User, templates::render(templates::get("generation_user_v1"),
                                                      {
                                                          {"label", std::string(display_name(target_label))},
                                                          {"question", std::string(question)},
                                                          {"model_solution", std::string(model_solution)},
                                                          {"rubric", std::string(rubric_text)},
                                                          {"case_elements", elements},
                                                          {"length", std::to_string(target_length_words)},
                                                      })});
  return p;
}

PromptText build_element_list_prompt(std::string_view rubric_text) {
  if (trim(rubric_text).empty()) throw ValidationError("element-list prompt needs a non-empty rubric");
  PromptText p;
  p.messages.push_back({Role::System, std::string(templates::get("analysis_system_v1"))});
  p.messages.push_back({Role::User, templates::render(templates::get("element_list_user_v1"),
                                                      {{"rubric", std::string(rubric_text)}})});
  return p;
}

PromptText build_case_statement_prompt(const std::vector<std::string>& elements, LabelScheme scheme, int n_cases) {
  if (elements.empty()) throw ValidationError("case-statement prompt needs at least one rubric element");
  if (n_cases < 1) throw ValidationError("case-statement prompt needs at least one case");
  std::string list;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    list += std::to_string(i + 1) + ". " + elements[i];
    if (i + 1 < elements.size()) list += '\n';
  }
  std::string labels;
  for (Label l : labels_of(scheme)) labels += (labels.empty() ? "\"" : ", \"") + std::string(to_string(l)) + "\"";
  PromptText p;
  p.messages.push_back({Role::System, std::string(templates::get("analysis_system_v1"))});
  p.messages.push_back({Role::User, templates::render(templates::get("case_statement_user_v1"),
                                                      {
                                                          {"elements", list},
                                                          {"n_cases", std::to_string(n_cases)},
                                                          {"labels", labels},
                                                      })});
  return p;
}

PromptText with_follow_up(PromptText prompt, std::string_view instruction) {
  prompt.messages.push_back({Role::User, std::string(instruction)});
  return prompt;
}

Label parse_score(std::string_view text, LabelScheme scheme) {
  const auto matches = find_scores(text);
  if (matches.empty()) {
    throw ScoreParseError(ScoreParseError::Kind::NoScoreFound, "no [[score]] found in model reply");
  }
  const auto digits = matches.back().digits;
  long long value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ScoreParseError(ScoreParseError::Kind::OutOfRange, "score [[" + std::string(digits) + "]] is out of range");
  }
  auto label = label_from_points(value, scheme);
  if (!label) {
    throw ScoreParseError(ScoreParseError::Kind::OutOfRange, "score [[" + std::string(digits) +
                                                                 "]] is not a legal " +
                                                                 std::string(to_string(scheme)) + " score");
  }
  return *label;
}

std::string render_score(Label label, LabelScheme scheme) { return "[[" + std::to_string(points(label, scheme)) + "]]"; }

std::string extract_explanation(std::string_view reply) {
  std::string_view body = reply;
  const auto matches = find_scores(reply);
  if (!matches.empty()) body = reply.substr(0, matches.back().begin);
  std::string text = trim(body);
  constexpr std::string_view kHeading = "Explanation:";
  if (text.rfind(kHeading, 0) == 0) text = trim(std::string_view(text).substr(kHeading.size()));
  return text;
}

std::optional<Json> extract_first_json_array(std::string_view text) {
  for (std::size_t start = text.find('['); start != std::string_view::npos; start = text.find('[', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '[' || c == '{') {
        ++depth;
      } else if (c == ']' || c == '}') {
        if (--depth == 0) {
          auto parsed = Json::parse(text.substr(start, i - start + 1), nullptr, false);
          if (!parsed.is_discarded() && parsed.is_array()) return parsed;
          break;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace rubricbench
