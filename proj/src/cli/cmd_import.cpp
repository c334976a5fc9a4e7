#include <iostream>

#include "commands.hpp"

namespace rubricbench::cli {

namespace {

struct ImportArgs {
  std::string input;
  LabelScheme scheme = LabelScheme::ThreeWay;
  bool five_way = false;
  std::string out;
};

int run_import(const ImportArgs& a) {
  const auto ds = load_dataset(a.input, a.scheme, a.five_way);
  const auto stats = dataset_stats(ds);
  std::cout << "dataset: " << ds.name << " (" << to_string(ds.scheme) << ", rubric: " << to_string(ds.rubric_kind)
            << ")\n"
            << format_stats(stats);
  if (!a.out.empty()) {
    Manifest m("import", a.out);
    m.config() = {{"input", a.input}, {"scheme", to_string(a.scheme)}, {"five_way", a.five_way}};
    m.add_input(a.input);
    m.write_output("dataset.jsonl", to_jsonl(ds));
    m.stats() = {{"n_samples", ds.samples.size()},
                 {"n_questions", stats.n_questions},
                 {"rubric_kind", to_string(ds.rubric_kind)}};
    m.save();
  }
  return 0;
}

}  // namespace

void add_import(CLI::App& app, Action& action) {
  auto a = std::make_shared<ImportArgs>();
  auto* sub = app.add_subcommand("import", "validate a JSONL dataset and print token statistics");
  sub->add_option("input", a->input, "dataset JSONL")->required()->check(CLI::ExistingFile);
  add_scheme_flag(sub, a->scheme);
  sub->add_flag("--five-way", a->five_way, "labels are five-way source labels; collapse them to the scheme");
  sub->add_option("--out", a->out, "also write the canonical dataset.jsonl and manifest.json here");
  sub->callback([a, &action] { action = [a] { return run_import(*a); }; });
}

}  // namespace rubricbench::cli
