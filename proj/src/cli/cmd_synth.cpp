#include <iostream>

#include "commands.hpp"
#include "rubricbench/synthesis.hpp"

namespace rubricbench::cli {

namespace {

struct SynthArgs {
  std::string input;
  LabelScheme scheme = LabelScheme::ThreeWay;
  std::string method = "labels-and-responses";
  std::vector<int> counts;
  std::size_t target_total = 0;
  int cases = kDefaultCaseCount;
  int min_length = 5;
  int max_length = 128;
  std::uint64_t seed = 0;
  bool relabel = false;
  std::string name;
  std::string out;
  ModelFlags grading{llm::ModelConfig::grading()};
  ModelFlags generation{llm::ModelConfig::generation()};
  TransportFlags transport;
};

int run_synth(const SynthArgs& a) {
  const auto base = load_dataset(a.input, a.scheme);
  SynthesisPlan plan;
  plan.method = *parse_synthesis_method(a.method);
  plan.scheme = a.scheme;
  if (!a.counts.empty()) {
    const auto labels = labels_of(a.scheme);
    if (a.counts.size() != labels.size()) {
      throw ValidationError("--counts needs " + std::to_string(labels.size()) + " values (most correct label first)");
    }
    plan.per_question_counts.clear();
    for (std::size_t i = 0; i < labels.size(); ++i) plan.per_question_counts[labels[i]] = a.counts[i];
  } else if (a.scheme == LabelScheme::TwoWay) {
    plan.per_question_counts.erase(Label::PartiallyCorrect);
  }
  plan.generation_cfg = a.generation.cfg;
  plan.grading_cfg = a.grading.cfg;
  plan.min_length_words = a.min_length;
  plan.max_length_words = a.max_length;
  plan.seed = a.seed;
  plan.cases_per_question = a.cases;
  if (a.target_total > 0) plan.target_total = a.target_total;
  plan.relabel = a.relabel;
  plan.dataset_name = a.name;
  plan.validate();

  auto client = make_client(a.transport);
  const auto result = run_synthesis(*client, base, plan);

  Manifest m("synth-data", a.out);
  m.config() = {{"input", a.input}, {"plan", plan.to_json()}, {"transport", a.transport.to_json()}};
  m.add_input(a.input);
  m.write_output("dataset.jsonl", to_jsonl(result.dataset));
  m.stats() = result.to_json();
  m.save();
  std::cout << a.method << ": " << result.dataset.samples.size() << " sample(s)";
  if (result.relabel) std::cout << ", relabel disagreements " << result.relabel->n_disagreements;
  if (!result.skipped_questions.empty()) std::cout << ", skipped questions " << result.skipped_questions.size();
  std::cout << '\n';
  return 0;
}

}  // namespace

void add_synth_data(CLI::App& app, Action& action) {
  auto a = std::make_shared<SynthArgs>();
  auto* sub = app.add_subcommand("synth-data", "synthesize LLM-labeled or LLM-generated training data");
  sub->add_option("input", a->input, "base dataset JSONL")->required()->check(CLI::ExistingFile);
  add_scheme_flag(sub, a->scheme);
  sub->add_option("--method", a->method, "labels-only, labels-and-responses, or diversity")
      ->check(CLI::IsMember({"labels-only", "labels-and-responses", "diversity"}))
      ->capture_default_str();
  sub->add_option("--counts", a->counts, "responses per question and label, most correct first (e.g. 2,2,2)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--target-total", a->target_total, "diversity: total generations across all questions");
  sub->add_option("--cases", a->cases, "diversity: case statements requested per question")->capture_default_str();
  sub->add_option("--min-length", a->min_length, "shortest requested response, in words")->capture_default_str();
  sub->add_option("--max-length", a->max_length, "longest requested response, in words")->capture_default_str();
  sub->add_option("--seed", a->seed, "random seed")->capture_default_str();
  sub->add_flag("--relabel", a->relabel, "labels-and-responses: relabel the generated responses");
  sub->add_option("--name", a->name, "output dataset name");
  sub->add_option("--out", a->out, "output directory")->required();
  add_model_flags(sub, a->grading);
  add_model_flags(sub, a->generation, "gen-");
  add_transport_flags(sub, a->transport);
  sub->callback([a, &action] { action = [a] { return run_synth(*a); }; });
}

}  // namespace rubricbench::cli
