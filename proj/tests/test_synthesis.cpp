#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>

#include "fake_llm.hpp"
#include "rubricbench/log.hpp"
#include "rubricbench/replay.hpp"
#include "rubricbench/synthesis.hpp"

using namespace rubricbench;
namespace fs = std::filesystem;

namespace {

Dataset test_set() { return import_jsonl(RB_FIXTURES_DIR "/toy_3way_test.jsonl", LabelScheme::ThreeWay); }

std::vector<QuestionSpec> three_questions() {
  auto qs = questions_of(test_set());
  qs.resize(3);
  return qs;
}

struct QuietWarnings {
  QuietWarnings() : prev(set_warning_sink([this](std::string_view w) { seen.emplace_back(w); })) {}
  ~QuietWarnings() { set_warning_sink(prev); }
  std::vector<std::string> seen;
  WarningSink prev;
};

}  // namespace

TEST_CASE("labels and responses: counts, lengths, provenance") {
  llm::ChatClient client(std::make_shared<testing::FakeLlm>(), {});
  SynthesisPlan plan;
  plan.per_question_counts = {{Label::Correct, 2}, {Label::PartiallyCorrect, 2}, {Label::Incorrect, 2}};
  plan.seed = 3;
  const auto res = generate_labeled_responses(client, three_questions(), plan);
  REQUIRE(res.dataset.samples.size() == 18);
  CHECK(res.n_requested == 18);
  std::map<Label, int> counts;
  for (const auto& s : res.dataset.samples) {
    ++counts[s.label];
    CHECK(s.provenance == Provenance::LlmGenerated);
    CHECK(s.meta.at("generator_model") == plan.generation_cfg.model_name);
    const int target = s.meta.at("target_length_words").get<int>();
    CHECK(target >= 5);
    CHECK(target <= 128);
    CHECK(count_whitespace_tokens(s.response_text) == static_cast<std::size_t>(target));
  }
  CHECK(counts[Label::Correct] == 6);
  CHECK(counts[Label::PartiallyCorrect] == 6);
  CHECK(counts[Label::Incorrect] == 6);
  CHECK(parse_jsonl(to_jsonl(res.dataset), LabelScheme::ThreeWay).samples.size() == 18);
}

TEST_CASE("generation is reproducible and resumes from the cache") {
  const auto dir = fs::temp_directory_path() / ("rb-synth-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  SynthesisPlan plan;
  plan.seed = 5;
  llm::ClientOptions opt;
  opt.cache_dir = dir;
  auto first = std::make_shared<testing::FakeLlm>();
  llm::ChatClient a(first, opt);
  const auto x = generate_labeled_responses(a, three_questions(), plan);
  auto second = std::make_shared<testing::FakeLlm>();
  llm::ChatClient b(second, opt);
  const auto y = generate_labeled_responses(b, three_questions(), plan);
  CHECK(to_jsonl(x.dataset) == to_jsonl(y.dataset));
  CHECK(second->calls() == 0);
  fs::remove_all(dir);
}

TEST_CASE("relabel counts disagreements against scripted grades") {
  auto ds = test_set();
  ds.samples.resize(5);
  const auto cfg = llm::ModelConfig::grading();
  const auto prompts = build_grading_prompts(ds, {});
  // Gold labels here are C, P, I, C, P. Three of the five replies differ.
  const char* replies[] = {"[[2]]", "[[2]]", "[[1]]", "[[0]]", "[[1]]"};
  llm::ReplayFixture fx;
  for (std::size_t i = 0; i < 5; ++i) fx.add_chat(llm::ChatRequest::make(cfg, prompts[i]), replies[i]);
  llm::ChatClient client(std::make_shared<llm::ReplayTransport>(fx), {});
  std::vector<Label> gold;
  for (const auto& s : ds.samples) gold.push_back(s.label);
  REQUIRE(gold == std::vector<Label>{Label::Correct, Label::PartiallyCorrect, Label::Incorrect, Label::Correct,
                                     Label::PartiallyCorrect});
  const auto res = relabel_dataset(client, ds, cfg);
  CHECK(res.report.n_disagreements == 3);
  CHECK(res.report.n_relabeled == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& s = res.dataset.samples[i];
    CHECK(s.label == parse_score(replies[i], LabelScheme::ThreeWay));
    CHECK(s.meta.at("original_label") == std::string(to_string(gold[i])));
    CHECK(s.provenance == Provenance::LlmLabeled);
    CHECK(s.meta.at("labeler_model") == cfg.model_name);
  }
}

TEST_CASE("relabel drops unscored samples and needs rubrics") {
  QuietWarnings quiet;
  llm::ChatClient client(std::make_shared<testing::FakeLlm>(), {});
  const auto ds = test_set();
  const auto res = relabel_dataset(client, ds, llm::ModelConfig::grading());
  CHECK(res.report.n_unscored == 1);
  CHECK(res.dataset.samples.size() == ds.samples.size() - 1);
  CHECK_FALSE(quiet.seen.empty());

  auto bare = ds;
  bare.samples[4].rubric_text.reset();
  try {
    relabel_dataset(client, bare, llm::ModelConfig::grading());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(bare.samples[4].question_id) != std::string::npos);
  }
}

TEST_CASE("element and case parsing") {
  CHECK(parse_element_list("Sure: [\" heat \", \"metal\", \"heat\"]") == std::vector<std::string>{"heat", "metal"});
  CHECK_THROWS_AS(parse_element_list("no list here"), ValidationError);
  CHECK_THROWS_AS(parse_element_list("[]"), ValidationError);
  const std::vector<std::string> els{"heat", "metal"};
  const auto c = parse_case_statement(Json{{"included_elements", {"heat"}}, {"label", "Partially Correct"}}, els,
                                      LabelScheme::ThreeWay);
  CHECK(c.label == Label::PartiallyCorrect);
  CHECK_THROWS_AS(parse_case_statement(Json{{"included_elements", {"wood"}}, {"label", "correct"}}, els,
                                       LabelScheme::ThreeWay),
                  ValidationError);
  CHECK_THROWS_AS(parse_case_statement(Json{{"included_elements", Json::array()}, {"label", "partially_correct"}}, els,
                                       LabelScheme::TwoWay),
                  ValidationError);
  QuietWarnings quiet;
  const auto parsed = parse_case_statements(
      R"([{"included_elements":["heat"],"label":"correct"},{"included_elements":["gold"],"label":"incorrect"}])", els,
      LabelScheme::ThreeWay);
  CHECK(parsed.cases.size() == 1);
  CHECK(parsed.rejected == 1);
}

TEST_CASE("diversity-enhanced labels equal the relabel grades") {
  QuietWarnings quiet;
  auto fake = std::make_shared<testing::FakeLlm>();
  llm::ChatClient client(fake, {});
  SynthesisPlan plan;
  plan.method = SynthesisMethod::DiversityEnhanced;
  plan.seed = 7;
  plan.target_total = 30;
  const auto qs = questions_of(test_set());
  const auto res = diversity_enhanced_generate(client, qs, plan);
  CHECK(res.dataset.samples.size() + res.relabel->n_unscored == 30);
  CHECK(res.n_requested == 30);
  CHECK(res.rejected_cases > 0);
  REQUIRE(res.relabel);
  // Regrade independently and compare.
  auto check_ds = res.dataset;
  llm::ChatClient fresh(std::make_shared<testing::FakeLlm>(), {});
  const auto grades = grade_samples(fresh, plan.grading_cfg, check_ds, {});
  for (std::size_t i = 0; i < check_ds.samples.size(); ++i) {
    REQUIRE(grades.records[i].scored());
    CHECK(*grades.records[i].predicted == check_ds.samples[i].label);
    CHECK(check_ds.samples[i].meta.contains("case"));
  }
}

TEST_CASE("diversity skips questions whose element list is not JSON") {
  QuietWarnings quiet;
  auto qs = questions_of(test_set());
  *qs[0].rubric_text += "\n[no-json]";
  llm::ChatClient client(std::make_shared<testing::FakeLlm>(), {});
  SynthesisPlan plan;
  plan.method = SynthesisMethod::DiversityEnhanced;
  plan.cases_per_question = 4;
  const auto res = diversity_enhanced_generate(client, qs, plan);
  CHECK(res.skipped_questions == std::vector<std::string>{qs[0].question_id});
  for (const auto& s : res.dataset.samples) CHECK(s.question_id != qs[0].question_id);
  CHECK_FALSE(res.dataset.samples.empty());
}

TEST_CASE("diversity needs rubrics") {
  auto qs = questions_of(test_set());
  qs[1].rubric_text.reset();
  llm::ChatClient client(std::make_shared<testing::FakeLlm>(), {});
  SynthesisPlan plan;
  plan.method = SynthesisMethod::DiversityEnhanced;
  CHECK_THROWS_AS(diversity_enhanced_generate(client, qs, plan), ValidationError);
}

TEST_CASE("run_synthesis naming and labels-only") {
  QuietWarnings quiet;
  const auto base = import_jsonl(RB_FIXTURES_DIR "/toy_3way_train.jsonl", LabelScheme::ThreeWay);
  llm::ChatClient client(std::make_shared<testing::FakeLlm>(), {});
  SynthesisPlan plan;
  plan.method = SynthesisMethod::LabelsOnly;
  const auto lo = run_synthesis(client, base, plan);
  CHECK(lo.dataset.name == "toy-rubric-llm-labeled");
  for (const auto& s : lo.dataset.samples) CHECK(s.provenance == Provenance::LlmLabeled);
  plan.method = SynthesisMethod::LabelsAndResponses;
  CHECK(run_synthesis(client, base, plan).dataset.name == "toy-rubric-synth");
}

TEST_CASE("plan validation") {
  SynthesisPlan plan;
  plan.min_length_words = 50;
  plan.max_length_words = 10;
  CHECK_THROWS_AS(plan.validate(), ValidationError);
  SynthesisPlan two;
  two.scheme = LabelScheme::TwoWay;
  CHECK_THROWS_AS(two.validate(), ValidationError);
  SynthesisPlan neg;
  neg.per_question_counts[Label::Correct] = -1;
  CHECK_THROWS_AS(neg.validate(), ValidationError);
  CHECK(parse_synthesis_method("diversity") == SynthesisMethod::DiversityEnhanced);
  CHECK_FALSE(parse_synthesis_method("magic"));
}
