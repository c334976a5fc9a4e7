#pragma once

#include "common.hpp"

namespace rubricbench::cli {

void add_import(CLI::App& app, Action& action);
void add_split(CLI::App& app, Action& action);
void add_synth_meta(CLI::App& app, Action& action);
void add_grade(CLI::App& app, Action& action);
void add_relabel(CLI::App& app, Action& action);
void add_synth_data(CLI::App& app, Action& action);
void add_eval(CLI::App& app, Action& action);
void add_report(CLI::App& app, Action& action);
void add_similarity(CLI::App& app, Action& action);
void add_annotate(CLI::App& app, Action& action);

}  // namespace rubricbench::cli
