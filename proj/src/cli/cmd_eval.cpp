#include <iostream>

#include "commands.hpp"
#include "rubricbench/metrics.hpp"

namespace rubricbench::cli {

namespace {

struct EvalArgs {
  std::string input;
  bool by_question = false;
  int resamples = kDefaultBootstrapResamples;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
  std::string out;
};

int run_eval(const EvalArgs& a) {
  const auto records = load_results(a.input);
  if (records.empty()) throw ValidationError("results file has no records: " + a.input);
  EvalOptions opts{a.resamples, a.alpha, a.seed};
  const auto report = evaluate(records, opts);
  const auto md = report.to_markdown(a.by_question);
  std::cout << md;
  if (!a.out.empty()) {
    Manifest m("eval", a.out);
    m.config() = {{"input", a.input},
                  {"by_question", a.by_question},
                  {"resamples", a.resamples},
                  {"alpha", a.alpha},
                  {"seed", a.seed}};
    m.add_input(a.input);
    m.write_output("report.json", report.to_json().dump(2) + "\n");
    m.write_output("report.md", md);
    m.stats() = {{"n", report.n}, {"n_unscored", report.n_unscored}};
    m.save();
  }
  return 0;
}

}  // namespace

void add_eval(CLI::App& app, Action& action) {
  auto a = std::make_shared<EvalArgs>();
  auto* sub = app.add_subcommand("eval", "accuracy and macro-F1 with bootstrap confidence intervals");
  sub->add_option("input", a->input, "results.jsonl from grade")->required();
  sub->add_flag("--by-question", a->by_question, "add a per-question accuracy table");
  sub->add_option("--resamples", a->resamples, "bootstrap resamples")->capture_default_str();
  sub->add_option("--alpha", a->alpha, "1 - confidence level")->capture_default_str();
  sub->add_option("--seed", a->seed, "bootstrap seed")->capture_default_str();
  sub->add_option("--out", a->out, "write report.json, report.md and manifest.json here");
  sub->callback([a, &action] { action = [a] { return run_eval(*a); }; });
}

}  // namespace rubricbench::cli
