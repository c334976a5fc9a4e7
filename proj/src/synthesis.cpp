#include "rubricbench/synthesis.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "rubricbench/log.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<Label> parse_case_label(std::string text) {
  text = trim(text);
  for (char& c : text) {
    if (c == ' ' || c == '-') c = '_';
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return parse_label(text);
}

// `total` split into `parts` near-equal shares, larger shares first.
std::vector<std::size_t> distribute(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, parts == 0 ? 0 : total / parts);
  for (std::size_t i = 0; i < parts && i < total % parts; ++i) ++out[i];
  return out;
}

std::string padded(std::size_t n, int width = 3) {
  auto s = std::to_string(n);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

struct GenerationJob {
  const QuestionSpec* question = nullptr;
  Label target = Label::Incorrect;
  std::vector<std::string> elements;
  std::optional<CaseStatement> case_statement;
  std::string id;
};

std::vector<LabeledSample> run_generations(llm::ChatClient& client, const SynthesisPlan& plan,
                                           const std::vector<GenerationJob>& jobs, const std::string& dataset_name) {
  std::vector<LabeledSample> out(jobs.size());
  client.parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto& q = *job.question;
    Rng rng = Rng::derive(plan.seed, i);
    const int length = static_cast<int>(rng.between(plan.min_length_words, plan.max_length_words));
    const std::string rubric = q.rubric_text ? *q.rubric_text : std::string(label_level_rubric(plan.scheme));
    const auto prompt =
        build_generation_prompt(q.question_text, q.model_solution, rubric, job.target, length, job.elements);
    const auto reply = client.chat(plan.generation_cfg, llm::ChatRequest::make(plan.generation_cfg, prompt));

    auto& s = out[i];
    s.id = job.id;
    s.dataset = dataset_name;
    s.question_id = q.question_id;
    s.question_text = q.question_text;
    s.model_solution = q.model_solution;
    s.rubric_text = q.rubric_text;
    s.response_text = trim(reply.content);
    s.label = job.target;
    s.split = Split::Train;
    s.provenance = Provenance::LlmGenerated;
    s.meta[kGeneratorModelKey] = plan.generation_cfg.model_name;
    s.meta["target_label"] = std::string(to_string(job.target));
    s.meta["target_length_words"] = length;
    if (job.case_statement) s.meta["case"] = job.case_statement->to_json();
  });
  return out;
}

void require_rubrics(const std::vector<QuestionSpec>& questions, std::string_view why) {
  for (const auto& q : questions) {
    if (!q.rubric_text || trim(*q.rubric_text).empty()) {
      throw ValidationError(std::string(why) + ", but question '" + q.question_id + "' has none");
    }
  }
}

std::string default_name(const std::vector<QuestionSpec>& questions, const SynthesisPlan& plan) {
  if (!plan.dataset_name.empty()) return plan.dataset_name;
  return (questions.empty() ? std::string("synthetic") : questions.front().dataset) + "-synth";
}

// Sends `prompt`; on an unusable reply asks once more with the strict-format
// follow-up. Returns nullopt when both replies fail `parse`.
template <typename T, typename Parse>
std::optional<T> ask_json(llm::ChatClient& client, const llm::ModelConfig& cfg, const PromptText& prompt,
                          Parse parse, std::string& last_error) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto p = attempt == 0 ? prompt : with_follow_up(prompt, kJsonRetryInstruction);
    const auto reply = client.chat(cfg, llm::ChatRequest::make(cfg, p));
    try {
      return parse(reply.content);
    } catch (const ValidationError& e) {
      last_error = e.what();
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(SynthesisMethod method) {
  switch (method) {
    case SynthesisMethod::LabelsOnly: return "labels-only";
    case SynthesisMethod::LabelsAndResponses: return "labels-and-responses";
    case SynthesisMethod::DiversityEnhanced: return "diversity";
  }
  return "labels-only";
}

std::optional<SynthesisMethod> parse_synthesis_method(std::string_view text) {
  for (auto m : {SynthesisMethod::LabelsOnly, SynthesisMethod::LabelsAndResponses, SynthesisMethod::DiversityEnhanced}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

void SynthesisPlan::validate() const {
  if (min_length_words < 1 || min_length_words > max_length_words) {
    throw ValidationError("length range [" + std::to_string(min_length_words) + ", " +
                          std::to_string(max_length_words) + "] is empty");
  }
  for (const auto& [label, count] : per_question_counts) {
    if (count < 0) throw ValidationError("per-question count for " + std::string(to_string(label)) + " is negative");
    if (count > 0 && !is_legal(label, scheme)) {
      throw ValidationError("label " + std::string(to_string(label)) + " is not part of the " +
                            std::string(to_string(scheme)) + " scheme");
    }
  }
  if (cases_per_question < 1) throw ValidationError("cases per question must be at least 1");
}

Json SynthesisPlan::to_json() const {
  Json counts = Json::object();
  for (const auto& [label, count] : per_question_counts) counts[std::string(to_string(label))] = count;
  Json j{{"method", to_string(method)},
         {"scheme", to_string(scheme)},
         {"per_question_counts", counts},
         {"generation_cfg", generation_cfg.to_json()},
         {"grading_cfg", grading_cfg.to_json()},
         {"length_range", {min_length_words, max_length_words}},
         {"seed", seed},
         {"cases_per_question", cases_per_question},
         {"target_total", target_total ? Json(*target_total) : Json(nullptr)},
         {"relabel", relabel || method != SynthesisMethod::LabelsAndResponses}};
  if (!dataset_name.empty()) j["dataset_name"] = dataset_name;
  return j;
}

std::vector<QuestionSpec> questions_of(const Dataset& ds) {
  std::vector<QuestionSpec> out;
  std::set<std::string> seen;
  for (const auto& s : ds.samples) {
    if (!seen.insert(s.question_id).second) continue;
    out.push_back({s.question_id, s.dataset, s.question_text, s.model_solution, s.rubric_text});
  }
  return out;
}

Json CaseStatement::to_json() const {
  return Json{{"included_elements", included_elements}, {"label", to_string(label)}};
}

std::vector<std::string> parse_element_list(std::string_view reply) {
  const auto array = extract_first_json_array(reply);
  if (!array) throw ValidationError("reply contains no JSON array of elements");
  std::vector<std::string> out;
  for (const auto& item : *array) {
    if (!item.is_string()) throw ValidationError("element list entries must be strings");
    auto text = trim(item.get<std::string>());
    if (text.empty() || std::find(out.begin(), out.end(), text) != out.end()) continue;
    out.push_back(std::move(text));
  }
  if (out.empty()) throw ValidationError("element list is empty");
  return out;
}

CaseStatement parse_case_statement(const Json& item, const std::vector<std::string>& elements, LabelScheme scheme) {
  if (!item.is_object()) throw ValidationError("case statement must be a JSON object");
  auto label_it = item.find("label");
  if (label_it == item.end() || !label_it->is_string()) throw ValidationError("case statement has no label");
  const auto label = parse_case_label(label_it->get<std::string>());
  if (!label || !is_legal(*label, scheme)) {
    throw ValidationError("case label '" + label_it->get<std::string>() + "' is not a " +
                          std::string(to_string(scheme)) + " label");
  }
  auto el_it = item.find("included_elements");
  if (el_it == item.end() || !el_it->is_array()) throw ValidationError("case statement has no included_elements");
  CaseStatement c;
  c.label = *label;
  for (const auto& e : *el_it) {
    if (!e.is_string()) throw ValidationError("included_elements entries must be strings");
    auto text = trim(e.get<std::string>());
    if (std::find(elements.begin(), elements.end(), text) == elements.end()) {
      throw ValidationError("case element '" + text + "' is not in the rubric's element list");
    }
    if (std::find(c.included_elements.begin(), c.included_elements.end(), text) == c.included_elements.end()) {
      c.included_elements.push_back(std::move(text));
    }
  }
  return c;
}

CaseParse parse_case_statements(std::string_view reply, const std::vector<std::string>& elements,
                                LabelScheme scheme) {
  const auto array = extract_first_json_array(reply);
  if (!array) throw ValidationError("reply contains no JSON array of case statements");
  CaseParse out;
  for (const auto& item : *array) {
    try {
      out.cases.push_back(parse_case_statement(item, elements, scheme));
    } catch (const ValidationError& e) {
      warn(std::string("rejected case statement: ") + e.what());
      ++out.rejected;
    }
  }
  return out;
}

Json RelabelReport::to_json() const {
  return Json{{"n_input", n_input},
              {"n_relabeled", n_relabeled},
              {"n_unscored", n_unscored},
              {"n_disagreements", n_disagreements},
              {"unscored_ids", unscored_ids}};
}

RelabelResult relabel_dataset(llm::ChatClient& client, const Dataset& ds, const llm::ModelConfig& grading_cfg,
                              const PromptMode& mode, std::uint64_t seed, const Dataset* example_source) {
  if (mode.is_rubric()) {
    for (const auto& s : ds.samples) {
      if (!s.rubric_text || trim(*s.rubric_text).empty()) {
        throw ValidationError("relabeling in rubric mode needs a rubric, but question '" + s.question_id +
                              "' has none");
      }
    }
  }
  GradingOptions opts;
  opts.mode = mode;
  opts.scheme = ds.scheme;
  opts.seed = seed;
  opts.example_source = example_source;
  auto run = grade_samples(client, grading_cfg, ds, opts);

  RelabelResult result;
  result.dataset.name = ds.name;
  result.dataset.scheme = ds.scheme;
  result.report.n_input = ds.samples.size();
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& rec = run.records[i];
    if (!rec.scored()) {
      ++result.report.n_unscored;
      result.report.unscored_ids.push_back(rec.id);
      continue;
    }
    LabeledSample s = ds.samples[i];
    s.meta["original_label"] = std::string(to_string(s.label));
    s.meta[kLabelerModelKey] = grading_cfg.model_name;
    if (*rec.predicted != s.label) ++result.report.n_disagreements;
    s.label = *rec.predicted;
    if (s.provenance == Provenance::Human) s.provenance = Provenance::LlmLabeled;
    result.dataset.samples.push_back(std::move(s));
  }
  result.report.n_relabeled = result.dataset.samples.size();
  if (result.report.n_unscored > 0) {
    warn("relabel dropped " + std::to_string(result.report.n_unscored) + " unscored sample(s)");
  }
  result.dataset.rubric_kind = infer_rubric_kind(result.dataset.samples);
  result.records = std::move(run.records);
  return result;
}

Json SynthesisResult::to_json() const {
  return Json{{"n_requested", n_requested},
              {"n_generated", n_generated},
              {"n_output", dataset.samples.size()},
              {"relabel", relabel ? relabel->to_json() : Json(nullptr)},
              {"skipped_questions", skipped_questions},
              {"rejected_cases", rejected_cases}};
}

SynthesisResult generate_labeled_responses(llm::ChatClient& client, const std::vector<QuestionSpec>& questions,
                                           const SynthesisPlan& plan) {
  plan.validate();
  if (plan.relabel) require_rubrics(questions, "relabeling needs a rubric");
  std::vector<GenerationJob> jobs;
  for (const auto& q : questions) {
    for (Label label : labels_of(plan.scheme)) {
      auto it = plan.per_question_counts.find(label);
      const int count = it == plan.per_question_counts.end() ? 0 : it->second;
      for (int i = 0; i < count; ++i) {
        GenerationJob job;
        job.question = &q;
        job.target = label;
        job.id = q.question_id + "-lr-" + std::string(to_string(label)) + "-" + padded(static_cast<std::size_t>(i) + 1);
        jobs.push_back(std::move(job));
      }
    }
  }
  SynthesisResult result;
  result.n_requested = jobs.size();
  result.dataset.name = default_name(questions, plan);
  result.dataset.scheme = plan.scheme;
  result.dataset.samples = run_generations(client, plan, jobs, result.dataset.name);
  result.n_generated = result.dataset.samples.size();
  result.dataset.rubric_kind = infer_rubric_kind(result.dataset.samples);
  if (plan.relabel) {
    auto rel = relabel_dataset(client, result.dataset, plan.grading_cfg);
    result.dataset = std::move(rel.dataset);
    result.relabel = rel.report;
  }
  return result;
}

SynthesisResult diversity_enhanced_generate(llm::ChatClient& client, const std::vector<QuestionSpec>& questions,
                                            const SynthesisPlan& plan) {
  plan.validate();
  require_rubrics(questions, "diversity-enhanced synthesis needs a question-specific rubric");

  struct Analysis {
    std::vector<std::string> elements;
    std::vector<CaseStatement> cases;
    std::size_t rejected = 0;
    bool skipped = false;
  };
  std::vector<Analysis> analyses(questions.size());

  client.parallel_for(questions.size(), [&](std::size_t qi) {
    const auto& q = questions[qi];
    auto& a = analyses[qi];
    std::string error;
    auto elements = ask_json<std::vector<std::string>>(client, plan.generation_cfg,
                                                       build_element_list_prompt(*q.rubric_text),
                                                       [](std::string_view r) { return parse_element_list(r); }, error);
    if (!elements) {
      warn("skipping question '" + q.question_id + "': element list unusable after retry (" + error + ")");
      a.skipped = true;
      return;
    }
    a.elements = std::move(*elements);
    auto cases = ask_json<CaseParse>(
        client, plan.generation_cfg, build_case_statement_prompt(a.elements, plan.scheme, plan.cases_per_question),
        [&](std::string_view r) {
          auto parsed = parse_case_statements(r, a.elements, plan.scheme);
          if (parsed.cases.empty()) throw ValidationError("no valid case statements");
          return parsed;
        },
        error);
    if (!cases) {
      warn("skipping question '" + q.question_id + "': case statements unusable after retry (" + error + ")");
      a.skipped = true;
      return;
    }
    a.cases = std::move(cases->cases);
    a.rejected = cases->rejected;
  });

  SynthesisResult result;
  std::vector<std::size_t> active;
  for (std::size_t qi = 0; qi < questions.size(); ++qi) {
    result.rejected_cases += analyses[qi].rejected;
    if (analyses[qi].skipped) {
      result.skipped_questions.push_back(questions[qi].question_id);
    } else {
      active.push_back(qi);
    }
  }

  std::vector<std::size_t> quotas;
  if (plan.target_total) quotas = distribute(*plan.target_total, active.size());

  std::vector<GenerationJob> jobs;
  for (std::size_t ai = 0; ai < active.size(); ++ai) {
    const auto& q = questions[active[ai]];
    const auto& cases = analyses[active[ai]].cases;
    const auto reps = plan.target_total ? distribute(quotas[ai], cases.size()) : std::vector<std::size_t>(cases.size(), 1);
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
      for (std::size_t r = 0; r < reps[ci]; ++r) {
        GenerationJob job;
        job.question = &q;
        job.target = cases[ci].label;
        job.elements = cases[ci].included_elements;
        job.case_statement = cases[ci];
        job.id = q.question_id + "-div-" + padded(ci + 1, 2) + "-" + padded(r + 1);
        jobs.push_back(std::move(job));
      }
    }
  }

  Dataset generated;
  generated.name = default_name(questions, plan);
  generated.scheme = plan.scheme;
  generated.samples = run_generations(client, plan, jobs, generated.name);
  generated.rubric_kind = infer_rubric_kind(generated.samples);
  result.n_requested = jobs.size();
  result.n_generated = generated.samples.size();

  auto rel = relabel_dataset(client, generated, plan.grading_cfg);
  result.dataset = std::move(rel.dataset);
  result.relabel = rel.report;
  return result;
}

SynthesisResult run_synthesis(llm::ChatClient& client, const Dataset& base, const SynthesisPlan& plan) {
  SynthesisPlan p = plan;
  p.scheme = base.scheme;
  switch (plan.method) {
    case SynthesisMethod::LabelsOnly: {
      p.validate();
      Dataset train;
      train.name = plan.dataset_name.empty() ? base.name + "-llm-labeled" : plan.dataset_name;
      train.scheme = base.scheme;
      for (const auto& s : base.samples) {
        if (s.split == Split::Train) {
          train.samples.push_back(s);
          train.samples.back().dataset = train.name;
        }
      }
      auto rel = relabel_dataset(client, train, p.grading_cfg);
      SynthesisResult result;
      result.n_requested = train.samples.size();
      result.dataset = std::move(rel.dataset);
      result.relabel = rel.report;
      return result;
    }
    case SynthesisMethod::LabelsAndResponses:
      if (p.dataset_name.empty()) p.dataset_name = base.name + "-synth";
      return generate_labeled_responses(client, questions_of(base), p);
    case SynthesisMethod::DiversityEnhanced:
      if (p.dataset_name.empty()) p.dataset_name = base.name + "-diverse";
      return diversity_enhanced_generate(client, questions_of(base), p);
  }
  throw ValidationError("unknown synthesis method");
}

}  // namespace rubricbench
