#include "rubricbench/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rubricbench/csv.hpp"

namespace rubricbench {

namespace {

int condition_rank(const std::string& c) {
  if (c.rfind("k=", 0) == 0) {
    try {
      return std::stoi(c.substr(2));
    } catch (const std::exception&) {
      return 100;
    }
  }
  if (c == "rubric") return 50;
  return 100;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

}  // namespace

std::vector<RunSummary> summarize_runs(const std::vector<GradingRecord>& records, const std::string& source,
                                       const EvalOptions& options) {
  std::map<std::pair<std::string, std::string>, std::vector<GradingRecord>> groups;
  for (const auto& r : records) groups[{r.dataset, r.mode}].push_back(r);
  std::vector<RunSummary> out;
  for (const auto& [key, recs] : groups) out.push_back({key.first, key.second, source, evaluate(recs, options)});
  return out;
}

void sort_summaries(std::vector<RunSummary>& runs) {
  std::stable_sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    const int ra = condition_rank(a.condition), rb = condition_rank(b.condition);
    if (ra != rb) return ra < rb;
    return a.condition < b.condition;
  });
}

std::string report_csv(const std::vector<RunSummary>& runs) {
  std::string out = std::string(kReportCsvHeader) + "\r\n";
  for (const auto& r : runs) {
    out += csv::write_row({r.dataset, r.condition, std::to_string(r.eval.n), std::to_string(r.eval.n_unscored),
                           format_fixed(r.eval.accuracy), format_fixed(r.eval.accuracy_ci.lo),
                           format_fixed(r.eval.accuracy_ci.hi), format_fixed(r.eval.macro_f1),
                           format_fixed(r.eval.f1_ci.lo), format_fixed(r.eval.f1_ci.hi), r.source});
  }
  return out;
}

std::string report_markdown(const std::vector<RunSummary>& runs) {
  std::string out =
      "| dataset | condition | n | unscored | accuracy | accuracy CI | macro-F1 | F1 CI |\n"
      "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : runs) {
    out += "| " + r.dataset + " | " + r.condition + " | " + std::to_string(r.eval.n) + " | " +
           std::to_string(r.eval.n_unscored) + " | " + format_fixed(r.eval.accuracy) + " | [" +
           format_fixed(r.eval.accuracy_ci.lo) + ", " + format_fixed(r.eval.accuracy_ci.hi) + "] | " +
           format_fixed(r.eval.macro_f1) + " | [" + format_fixed(r.eval.f1_ci.lo) + ", " +
           format_fixed(r.eval.f1_ci.hi) + "] |\n";
  }
  return out;
}

std::string render_bar_chart_svg(const std::vector<RunSummary>& runs, const std::string& title) {
  std::vector<std::string> datasets;
  std::vector<std::string> conditions;
  for (const auto& r : runs) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
    if (std::find(conditions.begin(), conditions.end(), r.condition) == conditions.end()) {
      conditions.push_back(r.condition);
    }
  }
  std::stable_sort(conditions.begin(), conditions.end(), [](const std::string& a, const std::string& b) {
    const int ra = condition_rank(a), rb = condition_rank(b);
    return ra != rb ? ra < rb : a < b;
  });

  const double bar_w = 18.0, bar_gap = 2.0, group_gap = 30.0;
  const double left = 60.0, top = 50.0, plot_h = 300.0, bottom = 70.0;
  const double group_w = static_cast<double>(conditions.size()) * (bar_w + bar_gap) - bar_gap;
  const double plot_w = std::max(200.0, static_cast<double>(datasets.size()) * (group_w + group_gap) + group_gap);
  const double legend_w = 120.0;
  const double width = left + plot_w + legend_w, height = top + plot_h + bottom;
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
       "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(width / 2) + "\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) +
       "</text>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = t / 5.0;
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(y_of(v)) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
         num(y_of(v)) + "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y_of(v) + 4) + "\" text-anchor=\"end\">" + format_fixed(v, 1) +
         "</text>\n";
  }
  s += "<text x=\"15\" y=\"" + num(top + plot_h / 2) + "\" transform=\"rotate(-90 15 " + num(top + plot_h / 2) +
       ")\" text-anchor=\"middle\">Accuracy</text>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(y_of(0)) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
       num(y_of(0)) + "\" stroke=\"black\"/>\n";

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const double gx = left + group_gap + static_cast<double>(d) * (group_w + group_gap);
    for (std::size_t c = 0; c < conditions.size(); ++c) {
      auto it = std::find_if(runs.begin(), runs.end(), [&](const RunSummary& r) {
        return r.dataset == datasets[d] && r.condition == conditions[c];
      });
      if (it == runs.end()) continue;
      const double x = gx + static_cast<double>(c) * (bar_w + bar_gap);
      const double acc = it->eval.accuracy;
      s += "<rect class=\"bar\" data-dataset=\"" + xml_escape(datasets[d]) + "\" data-condition=\"" +
           xml_escape(conditions[c]) + "\" x=\"" + num(x) + "\" y=\"" + num(y_of(acc)) + "\" width=\"" + num(bar_w) +
           "\" height=\"" + num(plot_h * acc) + "\" fill=\"" + kPalette[c % std::size(kPalette)] + "\"><title>" +
           xml_escape(datasets[d] + " " + conditions[c]) + ": " + format_fixed(acc) + "</title></rect>\n";
      const double cx = x + bar_w / 2;
      s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(y_of(it->eval.accuracy_ci.lo)) + "\" x2=\"" + num(cx) +
           "\" y2=\"" + num(y_of(it->eval.accuracy_ci.hi)) + "\" stroke=\"black\"/>\n";
    }
    s += "<text x=\"" + num(gx + group_w / 2) + "\" y=\"" + num(top + plot_h + 18) + "\" text-anchor=\"middle\">" +
         xml_escape(datasets[d]) + "</text>\n";
  }
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    const double ly = top + 10 + static_cast<double>(c) * 18;
    const double lx = left + plot_w + 15;
    s += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 9) + "\" width=\"12\" height=\"12\" fill=\"" +
         kPalette[c % std::size(kPalette)] + "\"/>\n";
    s += "<text x=\"" + num(lx + 18) + "\" y=\"" + num(ly + 1) + "\">" + xml_escape(conditions[c]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rubricbench
