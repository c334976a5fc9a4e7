#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rubricbench/annotation.hpp"
#include "rubricbench/csv.hpp"
#include "rubricbench/digest.hpp"

using namespace rubricbench;

namespace {

const std::vector<GradingRecord>& records() {
  static const auto r = load_results(RB_FIXTURES_DIR "/results_disagreements.jsonl");
  return r;
}

std::string error_of(const AnnotationSheet& sheet) {
  try {
    summarize_annotations(sheet);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("sampling disagreements") {
  const auto sheet = sample_annotation_sheet(records(), AnnotationCondition::Disagreement, 50, 3);
  REQUIRE(sheet.rows.size() == 50);
  std::set<std::string> ids;
  for (const auto& r : sheet.rows) {
    CHECK(r.human_label != r.llm_label);
    CHECK(r.label_correctness.empty());
    ids.insert(r.sample_id);
  }
  CHECK(ids.size() == 50);
  CHECK(sample_annotation_sheet(records(), AnnotationCondition::Disagreement, 50, 3).to_csv() == sheet.to_csv());
  CHECK(sample_annotation_sheet(records(), AnnotationCondition::Disagreement, 50, 4).to_csv() != sheet.to_csv());
}

TEST_CASE("sampling agreed partially correct") {
  const auto sheet = sample_annotation_sheet(records(), AnnotationCondition::AgreedPartiallyCorrect, 10, 1);
  for (const auto& r : sheet.rows) {
    CHECK(r.human_label == r.llm_label);
    CHECK(r.human_label == "Partially Correct");
  }
  try {
    sample_annotation_sheet(records(), AnnotationCondition::AgreedPartiallyCorrect, 11, 1);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("only 10 are available") != std::string::npos);
  }
}

TEST_CASE("too few disagreements is an error") {
  auto few = records();
  std::size_t kept = 0;
  std::vector<GradingRecord> subset;
  for (const auto& r : few) {
    if (*r.predicted != r.gold && kept++ >= 30) continue;
    subset.push_back(r);
  }
  try {
    sample_annotation_sheet(subset, AnnotationCondition::Disagreement, 50, 0);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("only 30 are available") != std::string::npos);
  }
}

TEST_CASE("summary of a complete sheet") {
  const auto sheet = AnnotationSheet::from_csv(read_file(RB_FIXTURES_DIR "/sheet_complete.csv"));
  const auto s = summarize_annotations(sheet);
  CHECK(s.n == 50);
  CHECK(s.explainability_yes == 48);
  CHECK(s.fraction(s.explainability_yes) == doctest::Approx(0.96));
  CHECK(s.label_human == 30);
  CHECK(s.label_llm == 20);
  CHECK(s.subjectivity_yes == 10);
  CHECK(s.to_markdown().find("96.0%") != std::string::npos);
  CHECK(s.to_json().at("n") == 50);
}

TEST_CASE("blank judgments are rejected with the row id") {
  const auto sheet = AnnotationSheet::from_csv(read_file(RB_FIXTURES_DIR "/sheet_with_blank.csv"));
  const auto msg = error_of(sheet);
  REQUIRE_FALSE(msg.empty());
  CHECK(msg.find(sheet.rows[7].sample_id) != std::string::npos);
  auto bad = sheet;
  bad.rows[7].subjectivity = "maybe";
  CHECK_FALSE(error_of(bad).empty());
  bad.rows[7].subjectivity = "yes";
  CHECK(error_of(bad).empty());
}

TEST_CASE("csv round trip with awkward text") {
  AnnotationSheet sheet;
  AnnotationRow r;
  r.sample_id = "a";
  r.response = "He said \"hi\",\nthen left";
  r.rubric = "- Correct: x, y";
  r.label_correctness = "Human";
  sheet.rows.push_back(r);
  const auto back = AnnotationSheet::from_csv(sheet.to_csv());
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0].response == r.response);
  CHECK(back.rows[0].rubric == r.rubric);
  CHECK(back.to_csv() == sheet.to_csv());
  CHECK_THROWS_AS(AnnotationSheet::from_csv("id,other\n1,2\n"), ValidationError);
  CHECK_THROWS_AS(csv::parse("\"open"), ValidationError);
  CHECK(csv::parse("\xEF\xBB\xBF" "a,b\r\n1,2\r\n") == std::vector<std::vector<std::string>>{{"a", "b"}, {"1", "2"}});
}

TEST_CASE("condition names") {
  CHECK(parse_condition("disagreement") == AnnotationCondition::Disagreement);
  CHECK(parse_condition("agreed-partially-correct") == AnnotationCondition::AgreedPartiallyCorrect);
  CHECK_FALSE(parse_condition("all"));
}
