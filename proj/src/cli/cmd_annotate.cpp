#include <iostream>

#include "commands.hpp"
#include "rubricbench/annotation.hpp"
#include "rubricbench/digest.hpp"

namespace rubricbench::cli {

namespace {

struct SampleArgs {
  std::string input;
  std::string condition = "disagreement";
  std::size_t n = 50;
  std::uint64_t seed = 0;
  std::string out;
};

struct SummarizeArgs {
  std::string input;
  std::string out;
};

int run_sample(const SampleArgs& a) {
  const auto records = load_results(a.input);
  const auto sheet = sample_annotation_sheet(records, *parse_condition(a.condition), a.n, a.seed);
  Manifest m("annotate sample", a.out);
  m.config() = {{"input", a.input}, {"condition", a.condition}, {"n", a.n}, {"seed", a.seed}};
  m.add_input(a.input);
  m.write_output("sheet.csv", sheet.to_csv());
  m.stats() = {{"rows", sheet.rows.size()}};
  m.save();
  std::cout << "wrote " << sheet.rows.size() << " row(s) to " << (fs::path(a.out) / "sheet.csv").string() << '\n';
  return 0;
}

int run_summarize(const SummarizeArgs& a) {
  if (!fs::exists(a.input)) throw ValidationError("annotation sheet not found: " + a.input);
  const auto summary = summarize_annotations(AnnotationSheet::from_csv(read_file(a.input)));
  const auto md = summary.to_markdown();
  std::cout << md;
  if (!a.out.empty()) {
    Manifest m("annotate summarize", a.out);
    m.config() = {{"input", a.input}};
    m.add_input(a.input);
    m.write_output("summary.json", summary.to_json().dump(2) + "\n");
    m.write_output("summary.md", md);
    m.save();
  }
  return 0;
}

}  // namespace

void add_annotate(CLI::App& app, Action& action) {
  auto* annotate = app.add_subcommand("annotate", "feedback annotation sheets");
  annotate->require_subcommand(1);

  auto s = std::make_shared<SampleArgs>();
  auto* sample = annotate->add_subcommand("sample", "draw rows for manual annotation");
  sample->add_option("input", s->input, "results.jsonl (a --feedback run gives explanations)")->required();
  sample->add_option("--condition", s->condition, "disagreement or agreed-partially-correct")
      ->check(CLI::IsMember({"disagreement", "agreed-partially-correct"}))
      ->capture_default_str();
  sample->add_option("--n", s->n, "rows to draw")->capture_default_str();
  sample->add_option("--seed", s->seed, "random seed")->capture_default_str();
  sample->add_option("--out", s->out, "output directory")->required();
  sample->callback([s, &action] { action = [s] { return run_sample(*s); }; });

  auto m = std::make_shared<SummarizeArgs>();
  auto* summarize = annotate->add_subcommand("summarize", "proportions per judgment dimension");
  summarize->add_option("input", m->input, "completed sheet.csv")->required();
  summarize->add_option("--out", m->out, "write summary.json, summary.md and manifest.json here");
  summarize->callback([m, &action] { action = [m] { return run_summarize(*m); }; });
}

}  // namespace rubricbench::cli
