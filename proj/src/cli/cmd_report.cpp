#include <iostream>

#include "commands.hpp"
#include "rubricbench/report.hpp"

namespace rubricbench::cli {

namespace {

struct ReportArgs {
  std::vector<std::string> runs;
  std::string title = "Accuracy by prompting condition";
  int resamples = kDefaultBootstrapResamples;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
  std::string out;
};

int run_report(const ReportArgs& a) {
  for (const auto& path : a.runs) {
    if (!fs::exists(path)) throw ValidationError("run results file not found: " + path);
  }
  EvalOptions opts{a.resamples, a.alpha, a.seed};
  std::vector<RunSummary> summaries;
  for (const auto& path : a.runs) {
    auto s = summarize_runs(load_results(path), path, opts);
    summaries.insert(summaries.end(), s.begin(), s.end());
  }
  if (summaries.empty()) throw ValidationError("the run files contain no records");
  sort_summaries(summaries);

  Manifest m("report", a.out);
  m.config() = {{"runs", a.runs}, {"title", a.title}, {"resamples", a.resamples}, {"alpha", a.alpha}, {"seed", a.seed}};
  for (const auto& path : a.runs) m.add_input(path);
  const auto md = report_markdown(summaries);
  m.write_output("report.md", md);
  m.write_output("report.csv", report_csv(summaries));
  m.write_output("chart.svg", render_bar_chart_svg(summaries, a.title));
  m.stats() = {{"n_cells", summaries.size()}};
  m.save();
  std::cout << md;
  return 0;
}

}  // namespace

void add_report(CLI::App& app, Action& action) {
  auto a = std::make_shared<ReportArgs>();
  auto* sub = app.add_subcommand("report", "tables and a bar chart across grading runs");
  sub->add_option("runs", a->runs, "results.jsonl files")->required();
  sub->add_option("--title", a->title, "chart title")->capture_default_str();
  sub->add_option("--resamples", a->resamples, "bootstrap resamples")->capture_default_str();
  sub->add_option("--alpha", a->alpha, "1 - confidence level")->capture_default_str();
  sub->add_option("--seed", a->seed, "bootstrap seed")->capture_default_str();
  sub->add_option("--out", a->out, "output directory")->required();
  sub->callback([a, &action] { action = [a] { return run_report(*a); }; });
}

}  // namespace rubricbench::cli
