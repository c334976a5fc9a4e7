#pragma once

#include <string>
#include <vector>

#include "rubricbench/grading.hpp"
#include "rubricbench/metrics.hpp"

namespace rubricbench {

// Metrics of one (dataset, prompting condition) cell.
struct RunSummary {
  std::string dataset;
  std::string condition;  // "k=0".."k=5", "rubric", "feedback"
  std::string source;     // results file
  EvalReport eval;
};

// One summary per (dataset, mode) found in `records`.
std::vector<RunSummary> summarize_runs(const std::vector<GradingRecord>& records, const std::string& source,
                                       const EvalOptions& options);

// Orders conditions k=0..k=5 first, then rubric, then anything else.
void sort_summaries(std::vector<RunSummary>& runs);

// dataset,condition,n,n_unscored,accuracy,accuracy_lo,accuracy_hi,macro_f1,f1_lo,f1_hi,source
inline constexpr const char* kReportCsvHeader =
    "dataset,condition,n,n_unscored,accuracy,accuracy_lo,accuracy_hi,macro_f1,f1_lo,f1_hi,source";

std::string report_csv(const std::vector<RunSummary>& runs);
std::string report_markdown(const std::vector<RunSummary>& runs);

// Grouped bar chart: one group per dataset, one bar per condition, bar
// height = accuracy, with CI whiskers.
std::string render_bar_chart_svg(const std::vector<RunSummary>& runs, const std::string& title);

}  // namespace rubricbench
