#include <iostream>

#include "commands.hpp"
#include "rubricbench/meta_synth.hpp"

namespace rubricbench::cli {

namespace {

struct SynthMetaArgs {
  std::string input;
  std::size_t n = 3000;
  std::string mode = "random";
  std::uint64_t seed = 0;
  bool no_rubric = false;
  std::string name;
  std::string split = "train";
  std::string out;
};

int run_synth_meta(const SynthMetaArgs& a) {
  const auto base = load_dataset(a.input, LabelScheme::TwoWay);
  meta::MetaDatasetOptions opts;
  opts.name = a.name;
  opts.include_rubric = !a.no_rubric;
  const auto split = parse_split(a.split);
  if (!split) throw ValidationError("unknown split '" + a.split + "'");
  opts.split = *split;
  const auto mode = a.mode == "fixed" ? meta::RubricMode::FixedRubric : meta::RubricMode::RandomRubric;
  const auto result = meta::generate_meta_dataset(base, a.n, mode, a.seed, opts);

  Json counts = Json::object();
  for (Label l : labels_of(LabelScheme::ThreeWay)) counts[std::string(to_string(l))] = 0;
  for (const auto& s : result.dataset.samples) counts[std::string(to_string(s.label))] = counts[std::string(to_string(s.label))].get<int>() + 1;

  Manifest m("synth-meta", a.out);
  m.config() = {{"input", a.input}, {"n", a.n},         {"mode", a.mode},   {"seed", a.seed},
                {"include_rubric", !a.no_rubric}, {"name", result.dataset.name}, {"split", a.split}};
  m.add_input(a.input);
  m.write_output("dataset.jsonl", to_jsonl(result.dataset));
  m.stats() = {{"n_samples", result.dataset.samples.size()},
               {"label_counts", counts},
               {"uncovered_responses", result.uncovered}};
  m.save();
  std::cout << "meta samples: " << result.dataset.samples.size() << " " << counts.dump() << '\n';
  if (!result.uncovered.empty()) std::cout << "uncovered base responses: " << result.uncovered.size() << '\n';
  return 0;
}

}  // namespace

void add_synth_meta(CLI::App& app, Action& action) {
  auto a = std::make_shared<SynthMetaArgs>();
  auto* sub = app.add_subcommand("synth-meta", "build a rubric-graded meta-question dataset from a 2-way base");
  sub->add_option("input", a->input, "2-way base dataset JSONL")->required()->check(CLI::ExistingFile);
  sub->add_option("--n", a->n, "number of meta samples")->capture_default_str();
  sub->add_option("--mode", a->mode, "rubric per sample (random) or one shared rubric (fixed)")
      ->check(CLI::IsMember({"random", "fixed"}))
      ->capture_default_str();
  sub->add_option("--seed", a->seed, "random seed")->capture_default_str();
  sub->add_flag("--no-rubric", a->no_rubric, "leave rubric_text out of the samples");
  sub->add_option("--name", a->name, "dataset name (default <base>-meta)");
  sub->add_option("--split", a->split, "split assigned to every sample")->capture_default_str();
  sub->add_option("--out", a->out, "output directory")->required();
  sub->callback([a, &action] { action = [a] { return run_synth_meta(*a); }; });
}

}  // namespace rubricbench::cli
