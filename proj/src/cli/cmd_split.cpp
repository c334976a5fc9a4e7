#include <iostream>

#include "commands.hpp"

namespace rubricbench::cli {

namespace {

struct SplitArgs {
  std::string input;
  LabelScheme scheme = LabelScheme::ThreeWay;
  double fraction = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_split(const SplitArgs& a) {
  const auto ds = load_dataset(a.input, a.scheme);
  const auto [train, val] = split_train_val(ds, a.fraction, a.seed);
  Manifest m("split", a.out);
  m.config() = {{"input", a.input}, {"scheme", to_string(a.scheme)}, {"fraction", a.fraction}, {"seed", a.seed}};
  m.add_input(a.input);
  m.write_output("train.jsonl", to_jsonl(train));
  m.write_output("val.jsonl", to_jsonl(val));
  m.stats() = {{"n_train", train.samples.size()}, {"n_val", val.samples.size()}};
  m.save();
  std::cout << "train: " << train.samples.size() << ", val: " << val.samples.size() << '\n';
  return 0;
}

}  // namespace

void add_split(CLI::App& app, Action& action) {
  auto a = std::make_shared<SplitArgs>();
  auto* sub = app.add_subcommand("split", "hold out a validation share of the training samples");
  sub->add_option("input", a->input, "dataset JSONL")->required()->check(CLI::ExistingFile);
  add_scheme_flag(sub, a->scheme);
  sub->add_option("--fraction", a->fraction, "validation share")->capture_default_str();
  sub->add_option("--seed", a->seed, "random seed")->capture_default_str();
  sub->add_option("--out", a->out, "output directory")->required();
  sub->callback([a, &action] { action = [a] { return run_split(*a); }; });
}

}  // namespace rubricbench::cli
