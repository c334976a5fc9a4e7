#include "app.hpp"

#include <algorithm>
#include <iostream>

#include "commands.hpp"

namespace rubricbench::cli {

namespace {

void build(CLI::App& app, Action& action) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", "rubricbench 0.1.0");
  app.add_option("--config", "JSON file of per-subcommand flag values (flags given here win)");
  add_import(app, action);
  add_split(app, action);
  add_synth_meta(app, action);
  add_grade(app, action);
  add_relabel(app, action);
  add_synth_data(app, action);
  add_eval(app, action);
  add_report(app, action);
  add_similarity(app, action);
  add_annotate(app, action);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app("Rubric-driven grading experiments: datasets, prompts, synthesis, evaluation.", "rubricbench");
  Action action;
  try {
    build(app, action);
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    return action ? action() : 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace rubricbench::cli
