#include <iostream>

#include "commands.hpp"
#include "rubricbench/grading.hpp"
#include "rubricbench/synthesis.hpp"

namespace rubricbench::cli {

namespace {

struct GradeArgs {
  std::string input;
  LabelScheme scheme = LabelScheme::ThreeWay;
  bool five_way = false;
  std::string mode = "rubric";
  int k = 0;
  std::string examples;
  std::uint64_t seed = 0;
  bool feedback = false;
  std::string out;
  ModelFlags model{llm::ModelConfig::grading()};
  TransportFlags transport;
};

PromptMode prompt_mode(const GradeArgs& a) {
  if (a.mode == "rubric") return PromptMode::rubric();
  return PromptMode::examples(a.k);
}

Json base_config(const GradeArgs& a) {
  return Json{{"input", a.input},
              {"scheme", to_string(a.scheme)},
              {"five_way", a.five_way},
              {"mode", a.mode},
              {"k", a.mode == "rubric" ? Json(nullptr) : Json(a.k)},
              {"examples", a.examples.empty() ? Json(nullptr) : Json(a.examples)},
              {"seed", a.seed},
              {"feedback", a.feedback},
              {"model", a.model.to_json()},
              {"transport", a.transport.to_json()}};
}

void print_client_stats(const llm::ChatClient& client) {
  const auto s = client.stats();
  std::cout << "requests: " << s.transport_calls << ", cache hits: " << s.cache_hits << ", retries: " << s.retries
            << '\n';
}

int run_grade(const GradeArgs& a) {
  const auto ds = load_dataset(a.input, a.scheme, a.five_way);
  std::optional<Dataset> example_source;
  if (!a.examples.empty()) example_source = load_dataset(a.examples, a.scheme, a.five_way);

  GradingOptions opts;
  opts.mode = prompt_mode(a);
  opts.scheme = a.scheme;
  opts.feedback = a.feedback;
  opts.seed = a.seed;
  opts.example_source = example_source ? &*example_source : nullptr;
  // Surface prompt-construction errors before opening any connection.
  build_grading_prompts(ds, opts);

  auto client = make_client(a.transport);
  const auto run = grade_samples(*client, a.model.cfg, ds, opts);

  Manifest m("grade", a.out);
  m.config() = base_config(a);
  m.add_input(a.input);
  if (!a.examples.empty()) m.add_input(a.examples);
  m.write_output("results.jsonl", to_jsonl(run.records));
  m.stats() = {{"n", run.records.size()}, {"n_unscored", run.n_unscored}};
  m.save();
  std::cout << "graded " << run.records.size() << " sample(s), unscored " << run.n_unscored << '\n';
  print_client_stats(*client);
  return 0;
}

int run_relabel(const GradeArgs& a) {
  const auto ds = load_dataset(a.input, a.scheme, a.five_way);
  std::optional<Dataset> example_source;
  if (!a.examples.empty()) example_source = load_dataset(a.examples, a.scheme, a.five_way);
  auto client = make_client(a.transport);
  const auto result = relabel_dataset(*client, ds, a.model.cfg, prompt_mode(a), a.seed,
                                      example_source ? &*example_source : nullptr);
  Manifest m("relabel", a.out);
  m.config() = base_config(a);
  m.add_input(a.input);
  if (!a.examples.empty()) m.add_input(a.examples);
  m.write_output("dataset.jsonl", to_jsonl(result.dataset));
  m.write_output("results.jsonl", to_jsonl(result.records));
  m.stats() = result.report.to_json();
  m.save();
  std::cout << "relabeled " << result.report.n_relabeled << " of " << result.report.n_input << ", disagreements "
            << result.report.n_disagreements << ", unscored " << result.report.n_unscored << '\n';
  print_client_stats(*client);
  return 0;
}

CLI::App* add_grading_flags(CLI::App* sub, GradeArgs& a) {
  sub->add_option("input", a.input, "dataset JSONL")->required()->check(CLI::ExistingFile);
  add_scheme_flag(sub, a.scheme);
  sub->add_flag("--five-way", a.five_way, "labels are five-way source labels");
  sub->add_option("--mode", a.mode, "question rubric, or label-level rubric plus graded examples")
      ->check(CLI::IsMember({"rubric", "examples"}))
      ->capture_default_str();
  sub->add_option("--k", a.k, "graded examples per label in examples mode")
      ->check(CLI::Range(0, kMaxExamplesPerLabel))
      ->capture_default_str();
  sub->add_option("--examples", a.examples, "dataset supplying the graded examples (default: the input)")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", a.seed, "random seed for example selection")->capture_default_str();
  sub->add_option("--out", a.out, "output directory")->required();
  add_model_flags(sub, a.model);
  add_transport_flags(sub, a.transport);
  return sub;
}

}  // namespace

void add_grade(CLI::App& app, Action& action) {
  auto a = std::make_shared<GradeArgs>();
  auto* sub = add_grading_flags(app.add_subcommand("grade", "grade responses with an LLM"), *a);
  sub->add_flag("--feedback", a->feedback, "ask for a written justification before the score");
  sub->callback([a, &action] { action = [a] { return run_grade(*a); }; });
}

void add_relabel(CLI::App& app, Action& action) {
  auto a = std::make_shared<GradeArgs>();
  add_grading_flags(app.add_subcommand("relabel", "replace labels with LLM grades"), *a)
      ->callback([a, &action] { action = [a] { return run_relabel(*a); }; });
}

}  // namespace rubricbench::cli
