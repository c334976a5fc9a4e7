#include "rubricbench/grading.hpp"

#include "rubricbench/digest.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench {

Json GradingRecord::to_json() const {
  Json j{{"id", id},
         {"dataset", dataset},
         {"question_id", question_id},
         {"mode", mode},
         {"scheme", to_string(scheme)},
         {"prompt_digest", prompt_digest},
         {"raw_reply", raw_reply},
         {"predicted", predicted ? Json(to_string(*predicted)) : Json(nullptr)},
         {"gold", to_string(gold)},
         {"status", predicted ? "scored" : "unscored"},
         {"attempts", attempts},
         {"response_text", response_text},
         {"rubric_text", rubric_text ? Json(*rubric_text) : Json(nullptr)}};
  if (!explanation.empty()) j["explanation"] = explanation;
  return j;
}

GradingRecord GradingRecord::from_json(const Json& j, std::string_view where) {
  auto fail = [&](const std::string& what) { return ValidationError(std::string(where) + ": " + what); };
  if (!j.is_object()) throw fail("expected a JSON object");
  GradingRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.dataset = j.value("dataset", std::string());
    r.question_id = j.value("question_id", std::string());
    r.mode = j.value("mode", std::string());
    const auto scheme = parse_scheme(j.value("scheme", std::string("3way")));
    if (!scheme) throw fail("unknown scheme");
    r.scheme = *scheme;
    r.prompt_digest = j.value("prompt_digest", std::string());
    r.raw_reply = j.value("raw_reply", std::string());
    const auto gold = parse_label(j.at("gold").get<std::string>());
    if (!gold) throw fail("unknown gold label");
    r.gold = *gold;
    if (auto it = j.find("predicted"); it != j.end() && !it->is_null()) {
      const auto pred = parse_label(it->get<std::string>());
      if (!pred) throw fail("unknown predicted label");
      r.predicted = *pred;
    }
    r.attempts = j.value("attempts", 0);
    r.response_text = j.value("response_text", std::string());
    if (auto it = j.find("rubric_text"); it != j.end() && it->is_string()) r.rubric_text = it->get<std::string>();
    r.explanation = j.value("explanation", std::string());
  } catch (const Json::exception& e) {
    throw fail(e.what());
  }
  return r;
}

std::vector<PromptText> build_grading_prompts(const Dataset& ds, const GradingOptions& options) {
  const Dataset& examples_from = options.example_source ? *options.example_source : ds;
  std::vector<PromptText> prompts;
  prompts.reserve(ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    if (options.feedback) {
      if (!s.rubric_text) {
        throw ValidationError("feedback grading needs a rubric, but question '" + s.question_id + "' has none");
      }
      prompts.push_back(build_feedback_prompt(s, *s.rubric_text, options.scheme));
      continue;
    }
    ExampleSet examples;
    if (!options.mode.is_rubric()) {
      Rng rng = Rng::derive(options.seed, i);
      examples = select_examples(examples_from, s.question_id, options.mode.k(), rng, s.id);
    }
    prompts.push_back(build_grading_prompt(s, options.mode, options.scheme, examples));
  }
  return prompts;
}

GradingRun grade_samples(llm::ChatClient& client, const llm::ModelConfig& cfg, const Dataset& ds,
                         const GradingOptions& options) {
  const auto prompts = build_grading_prompts(ds, options);
  GradingRun run;
  run.records.resize(ds.samples.size());

  client.parallel_for(ds.samples.size(), [&](std::size_t i) {
    const auto& s = ds.samples[i];
    auto& rec = run.records[i];
    rec.id = s.id;
    rec.dataset = s.dataset;
    rec.question_id = s.question_id;
    rec.mode = options.feedback ? "feedback" : options.mode.describe();
    rec.scheme = options.scheme;
    rec.prompt_digest = prompt_digest(prompts[i]);
    rec.gold = s.label;
    rec.response_text = s.response_text;
    rec.rubric_text = s.rubric_text;

    PromptText prompt = prompts[i];
    for (int attempt = 1; attempt <= 2; ++attempt) {
      rec.attempts = attempt;
      rec.raw_reply = client.chat(cfg, llm::ChatRequest::make(cfg, prompt)).content;
      try {
        rec.predicted = parse_score(rec.raw_reply, options.scheme);
        break;
      } catch (const ScoreParseError&) {
        prompt = with_follow_up(prompts[i], kScoreRetryInstruction);
      }
    }
    if (options.feedback) rec.explanation = extract_explanation(rec.raw_reply);
  });

  for (const auto& r : run.records) {
    if (!r.scored()) ++run.n_unscored;
  }
  return run;
}

std::string to_jsonl(const std::vector<GradingRecord>& records) {
  std::string out;
  for (const auto& r : records) out += r.to_json().dump() + "\n";
  return out;
}

std::vector<GradingRecord> parse_results_jsonl(std::string_view text) {
  std::vector<GradingRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    auto j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ValidationError(where + ": malformed JSON");
    out.push_back(GradingRecord::from_json(j, where));
  }
  return out;
}

std::vector<GradingRecord> load_results(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("results file not found: " + path.string());
  return parse_results_jsonl(read_file(path));
}

}  // namespace rubricbench
