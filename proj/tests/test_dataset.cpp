#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rubricbench/dataset.hpp"
#include "rubricbench/error.hpp"
#include "rubricbench/log.hpp"

using namespace rubricbench;

namespace {

std::string record(const std::string& id, const std::string& label, const std::string& extra = "") {
  return R"({"id":")" + id + R"(","dataset":"d","question_id":"q1","question_text":"Q?","model_solution":"S.",)" +
         R"("rubric_text":"R","response_text":"an answer","label":")" + label +
         R"(","split":"train","provenance":"human")" + extra + "}";
}

std::string error_of(const std::string& text, LabelScheme scheme) {
  try {
    parse_jsonl(text, scheme);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("well-formed three-line file") {
  auto ds = parse_jsonl(record("a", "correct") + "\n" + record("b", "incorrect") + "\n" +
                            record("c", "partially_correct") + "\n",
                        LabelScheme::ThreeWay);
  CHECK(ds.samples.size() == 3);
  CHECK(ds.name == "d");
  CHECK(ds.rubric_kind == RubricKind::QuestionSpecific);
  CHECK(parse_jsonl(to_jsonl(ds), LabelScheme::ThreeWay) == ds);
}

TEST_CASE("duplicate id cites its line") {
  auto msg = error_of(record("a", "correct") + "\n" + record("a", "incorrect") + "\n", LabelScheme::ThreeWay);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("duplicate") != std::string::npos);
}

TEST_CASE("label outside the scheme is rejected") {
  CHECK(error_of(record("a", "partially_correct"), LabelScheme::TwoWay).find("line 1") != std::string::npos);
  CHECK_FALSE(error_of(record("a", "PartiallyCorrect"), LabelScheme::ThreeWay).empty());
}

TEST_CASE("malformed line and missing field") {
  CHECK(error_of(record("a", "correct") + "\n{not json\n", LabelScheme::ThreeWay).find("line 2") != std::string::npos);
  CHECK(error_of(R"({"id":"x"})", LabelScheme::ThreeWay).find("missing required field") != std::string::npos);
}

TEST_CASE("unknown fields survive under meta with a warning") {
  std::vector<std::string> warnings;
  auto prev = set_warning_sink([&](std::string_view w) { warnings.emplace_back(w); });
  auto ds = parse_jsonl(record("a", "correct", R"(,"grader":"A7")"), LabelScheme::ThreeWay);
  set_warning_sink(prev);
  CHECK(ds.samples[0].meta["grader"] == "A7");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("grader") != std::string::npos);
}

TEST_CASE("LLM provenance requires the model name") {
  auto labeled = R"({"id":"a","dataset":"d","question_id":"q","question_text":"Q","model_solution":"S",)"
                 R"("response_text":"r","label":"correct","split":"train","provenance":"llm_labeled"})";
  CHECK_THROWS_AS(parse_jsonl(labeled, LabelScheme::ThreeWay), ValidationError);
  auto ok = std::string(labeled);
  ok.insert(ok.size() - 1, R"(,"meta":{"labeler_model":"m"})");
  CHECK(parse_jsonl(ok, LabelScheme::ThreeWay).samples[0].provenance == Provenance::LlmLabeled);
}

TEST_CASE("rubric must be identical within a question") {
  auto a = record("a", "correct");
  auto b = record("b", "correct");
  b.replace(b.find(R"("rubric_text":"R")"), 17, R"("rubric_text":"X")");
  CHECK(error_of(a + "\n" + b, LabelScheme::ThreeWay).find("rubric_text differs") != std::string::npos);
}

TEST_CASE("empty response text is allowed") {
  auto r = record("a", "correct");
  r.replace(r.find("an answer"), 9, "");
  CHECK(parse_jsonl(r, LabelScheme::ThreeWay).samples[0].response_text.empty());
}

TEST_CASE("five-way labels collapse on import") {
  auto ds = import_jsonl(RB_FIXTURES_DIR "/five_way_sample.jsonl", LabelScheme::ThreeWay, ImportOptions{true});
  std::vector<Label> got;
  for (const auto& s : ds.samples) got.push_back(s.label);
  CHECK(got == std::vector<Label>{Label::Correct, Label::PartiallyCorrect, Label::PartiallyCorrect, Label::Incorrect,
                                  Label::Incorrect, Label::Incorrect});
  auto two = import_jsonl(RB_FIXTURES_DIR "/five_way_sample.jsonl", LabelScheme::TwoWay, ImportOptions{true});
  CHECK(two.samples[1].label == Label::Incorrect);
  CHECK_THROWS_AS(import_jsonl(RB_FIXTURES_DIR "/five_way_sample.jsonl", LabelScheme::ThreeWay), ValidationError);
}

TEST_CASE("split_train_val is a deterministic disjoint partition") {
  auto ds = import_jsonl(RB_FIXTURES_DIR "/toy_base_2way.jsonl", LabelScheme::TwoWay);
  auto [train, val] = split_train_val(ds, 0.1, 5);
  CHECK(val.samples.size() == 8);  // round(0.1 * 80)
  CHECK(train.samples.size() + val.samples.size() == ds.samples.size());
  std::set<std::string> ids;
  for (const auto& s : train.samples) ids.insert(s.id);
  for (const auto& s : val.samples) {
    CHECK(s.split == Split::Val);
    CHECK(ids.insert(s.id).second);
  }
  auto again = split_train_val(ds, 0.1, 5);
  CHECK(again.second == val);
  CHECK_FALSE(split_train_val(ds, 0.1, 6).second == val);
  CHECK_THROWS_AS(split_train_val(ds, 0.0, 5), ValidationError);
  Dataset tiny = ds;
  tiny.samples.resize(1);
  CHECK_THROWS_AS(split_train_val(tiny, 0.5, 1), ValidationError);
}

TEST_CASE("token statistics") {
  Dataset ds;
  for (auto [id, q, text] : {std::tuple{"a", "q1", "one"}, {"b", "q1", "one two three"}, {"c", "q2", "a b c d e f"}}) {
    LabeledSample s;
    s.id = id;
    s.question_id = q;
    s.response_text = text;
    ds.samples.push_back(s);
  }
  auto st = dataset_stats(ds);
  CHECK(st.min == 1);
  CHECK(st.max == 6);
  CHECK(st.median == doctest::Approx(3.0));
  CHECK(st.mean == doctest::Approx(10.0 / 3.0));
  CHECK(st.n_questions == 2);
  CHECK(st.n_responses == 3);
  CHECK(count_whitespace_tokens("  a\tb\nc  ") == 3);
}
