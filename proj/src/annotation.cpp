#include "rubricbench/annotation.hpp"

#include <algorithm>

#include "rubricbench/csv.hpp"
#include "rubricbench/metrics.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench {

namespace {

std::string normalize(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string percent(double f) { return format_fixed(f * 100.0, 1) + "%"; }

}  // namespace

std::string_view to_string(AnnotationCondition condition) {
  return condition == AnnotationCondition::Disagreement ? "disagreement" : "agreed-partially-correct";
}

std::optional<AnnotationCondition> parse_condition(std::string_view text) {
  for (auto c : {AnnotationCondition::Disagreement, AnnotationCondition::AgreedPartiallyCorrect}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string AnnotationSheet::to_csv() const {
  std::vector<csv::Row> out;
  out.emplace_back(kAnnotationColumns.begin(), kAnnotationColumns.end());
  for (const auto& r : rows) {
    out.push_back({r.sample_id, r.dataset, r.question_id, r.human_label, r.llm_label, r.response, r.rubric,
                   r.llm_explanation, r.label_correctness, r.explainability, r.subjectivity});
  }
  return csv::write(out);
}

AnnotationSheet AnnotationSheet::from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ValidationError("annotation sheet is empty");
  const csv::Row expected(kAnnotationColumns.begin(), kAnnotationColumns.end());
  if (rows.front() != expected) throw ValidationError("annotation sheet header does not match the expected columns");
  AnnotationSheet sheet;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != expected.size()) {
      throw ValidationError("annotation sheet row " + std::to_string(i) + " has " + std::to_string(r.size()) +
                            " fields, expected " + std::to_string(expected.size()));
    }
    sheet.rows.push_back({r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8], r[9], r[10]});
  }
  return sheet;
}

AnnotationSheet sample_annotation_sheet(const std::vector<GradingRecord>& records, AnnotationCondition condition,
                                        std::size_t n, std::uint64_t seed) {
  std::vector<const GradingRecord*> matching;
  for (const auto& r : records) {
    if (!r.scored()) continue;
    const bool match = condition == AnnotationCondition::Disagreement
                           ? *r.predicted != r.gold
                           : (*r.predicted == Label::PartiallyCorrect && r.gold == Label::PartiallyCorrect);
    if (match) matching.push_back(&r);
  }
  if (matching.size() < n) {
    throw ValidationError("requested " + std::to_string(n) + " rows for condition '" +
                          std::string(to_string(condition)) + "' but only " + std::to_string(matching.size()) +
                          " are available");
  }
  Rng rng(seed);
  auto picks = rng.sample_indices(matching.size(), n);
  std::sort(picks.begin(), picks.end());
  AnnotationSheet sheet;
  for (auto i : picks) {
    const auto& r = *matching[i];
    AnnotationRow row;
    row.sample_id = r.id;
    row.dataset = r.dataset;
    row.question_id = r.question_id;
    row.human_label = std::string(display_name(r.gold));
    row.llm_label = std::string(display_name(*r.predicted));
    row.response = r.response_text;
    row.rubric = r.rubric_text.value_or("");
    row.llm_explanation = r.explanation.empty() ? r.raw_reply : r.explanation;
    sheet.rows.push_back(std::move(row));
  }
  return sheet;
}

AnnotationSummary summarize_annotations(const AnnotationSheet& sheet) {
  if (sheet.rows.empty()) throw ValidationError("annotation sheet has no rows");
  AnnotationSummary s;
  std::vector<std::string> incomplete;
  for (const auto& r : sheet.rows) {
    const auto lc = normalize(r.label_correctness);
    const auto ex = normalize(r.explainability);
    const auto su = normalize(r.subjectivity);
    const bool ok = (lc == "human" || lc == "llm") && (ex == "yes" || ex == "no") && (su == "yes" || su == "no");
    if (!ok) {
      incomplete.push_back(r.sample_id);
      continue;
    }
    ++s.n;
    (lc == "human" ? s.label_human : s.label_llm)++;
    (ex == "yes" ? s.explainability_yes : s.explainability_no)++;
    (su == "yes" ? s.subjectivity_yes : s.subjectivity_no)++;
  }
  if (!incomplete.empty()) {
    std::string ids;
    for (const auto& id : incomplete) ids += (ids.empty() ? "" : ", ") + id;
    throw ValidationError(std::to_string(incomplete.size()) + " row(s) have blank or invalid judgments: " + ids);
  }
  return s;
}

Json AnnotationSummary::to_json() const {
  auto pair = [&](std::size_t a, std::size_t b, const char* ka, const char* kb) {
    return Json{{ka, {{"count", a}, {"fraction", fraction(a)}}}, {kb, {{"count", b}, {"fraction", fraction(b)}}}};
  };
  return Json{{"n", n},
              {"label_correctness", pair(label_human, label_llm, "human", "llm")},
              {"explainability", pair(explainability_yes, explainability_no, "yes", "no")},
              {"subjectivity", pair(subjectivity_yes, subjectivity_no, "yes", "no")}};
}

std::string AnnotationSummary::to_markdown() const {
  std::string out = "| dimension | value | count | share |\n|---|---|---|---|\n";
  auto row = [&](const char* dim, const char* value, std::size_t count) {
    out += std::string("| ") + dim + " | " + value + " | " + std::to_string(count) + " | " + percent(fraction(count)) +
           " |\n";
  };
  row("Label Correctness", "Human", label_human);
  row("Label Correctness", "LLM", label_llm);
  row("Explainability", "Yes", explainability_yes);
  row("Explainability", "No", explainability_no);
  row("Subjectivity", "Yes", subjectivity_yes);
  row("Subjectivity", "No", subjectivity_no);
  out += "\nrows: " + std::to_string(n) + "\n";
  return out;
}

}  // namespace rubricbench
