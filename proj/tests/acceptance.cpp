// Acceptance checks, one line per criterion. Exit status is the number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "cli_harness.hpp"
#include "rubricbench/annotation.hpp"
#include "rubricbench/digest.hpp"
#include "rubricbench/meta_rubric.hpp"
#include "rubricbench/metrics.hpp"
#include "rubricbench/prompting.hpp"
#include "rubricbench/replay.hpp"
#include "rubricbench/similarity.hpp"

using namespace rubricbench;
using namespace rubricbench::meta;
using namespace rubricbench::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && outcome_.pass) {
      outcome_.pass = false;
      outcome_.detail = what;
    }
  }
  void note(const std::string& what) {
    if (outcome_.pass) outcome_.detail = what;
  }
  Outcome outcome() const { return outcome_; }

 private:
  Outcome outcome_;
};

// Condition recheck written against plain arrays.
Label recheck(const MetaRubric& r, std::uint8_t mask) {
  bool bit[5];
  int total = 0;
  for (int i = 0; i < 5; ++i) {
    bit[i] = (mask >> i) & 1;
    total += bit[i];
  }
  auto level_met = [&](int min, std::uint8_t required) {
    if (total < min) return false;
    for (int i = 0; i < 5; ++i) {
      if (((required >> i) & 1) && !bit[i]) return false;
    }
    return true;
  };
  if (level_met(r.correct.min_correct, r.correct.required.mask())) return Label::Correct;
  if (level_met(r.partially_correct.min_correct, r.partially_correct.required.mask())) return Label::PartiallyCorrect;
  return Label::Incorrect;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) { return format_fixed(v, digits); }

Outcome criterion1() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const auto r = generate_meta_rubric(rng);
    for (int m = 0; m < kVectorCount; ++m) {
      const auto mask = static_cast<std::uint8_t>(m);
      if (evaluate_rubric(r, CorrectnessVector::from_mask(mask)) != recheck(r, mask)) ++mismatches;
    }
  }
  const double secs = elapsed_s(t0);
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.expect(secs < 5.0, "took " + fmt(secs) + " s");
  c.note("1000 rubrics x 32 vectors, 0 mismatches, " + fmt(secs, 3) + " s");
  return c.outcome();
}

Outcome criterion2() {
  Checker c;
  const auto b = bucket_vectors(fixed_rubric());
  c.expect(b.correct.size() == 3 && b.partially_correct.size() == 4 && b.incorrect.size() == 25,
           "census " + std::to_string(b.correct.size()) + "/" + std::to_string(b.partially_correct.size()) + "/" +
               std::to_string(b.incorrect.size()));
  const MetaRubric worked{{4, QuestionSet::of({2, 3, 4})}, {2, QuestionSet::of({2})}};
  const auto v = [](bool a, bool b2, bool c2, bool d, bool e) { return CorrectnessVector::from_bools({a, b2, c2, d, e}); };
  c.expect(evaluate_rubric(worked, v(true, false, false, false, false)) == Label::Incorrect, "worked answer 1");
  c.expect(evaluate_rubric(worked, v(false, true, false, true, false)) == Label::PartiallyCorrect, "worked answer 2");
  c.expect(evaluate_rubric(worked, v(true, true, true, true, false)) == Label::Correct, "worked answer 3");
  c.note("census 3/4/25; worked answers Incorrect / Partially Correct / Correct");
  return c.outcome();
}

Outcome criterion3() {
  Checker c;
  std::size_t violations = 0;
  Rng rng(20240601);
  for (int i = 0; i < 10000; ++i) {
    const auto r = generate_meta_rubric(rng);
    const bool ok = r.correct.min_correct > r.partially_correct.min_correct &&
                    r.partially_correct.required.is_proper_subset_of(r.correct.required) &&
                    r.correct.min_correct > r.correct.required.size() &&
                    r.partially_correct.min_correct > r.partially_correct.required.size();
    const auto b = bucket_vectors(r);
    const bool buckets = !b.correct.empty() && !b.partially_correct.empty() && !b.incorrect.empty();
    bool monotone = true;
    for (int lo = 0; lo < kVectorCount && monotone; ++lo) {
      for (int hi = 0; hi < kVectorCount; ++hi) {
        if ((lo & hi) != lo) continue;
        const auto gl = points(evaluate_rubric(r, CorrectnessVector::from_mask(static_cast<std::uint8_t>(lo))),
                                     LabelScheme::ThreeWay);
        const auto gh = points(evaluate_rubric(r, CorrectnessVector::from_mask(static_cast<std::uint8_t>(hi))),
                                     LabelScheme::ThreeWay);
        if (gl > gh) {
          monotone = false;
          break;
        }
      }
    }
    violations += (ok && buckets && monotone) ? 0 : 1;
  }
  c.expect(violations == 0, std::to_string(violations) + " violating rubrics");
  c.note("10000 rubrics, 0 violations");
  return c.outcome();
}

Outcome criterion4() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  TempDir a("acc-meta-a"), b("acc-meta-b");
  const auto base_path = fixture("toy_base_2way.jsonl");
  for (const auto* dir : {&a, &b}) {
    const auto r = run_cli({"synth-meta", base_path, "--n", "3000", "--seed", "11", "--out", dir->path()});
    c.expect(r.code == 0, "synth-meta exited " + std::to_string(r.code) + ": " + r.err);
  }
  if (!c.outcome().pass) return c.outcome();
  const auto text = read_file(a / "dataset.jsonl");
  c.expect(text == read_file(b / "dataset.jsonl"), "repeated seed gave different bytes");
  const auto ds = parse_jsonl(text, LabelScheme::ThreeWay);
  const auto base = import_jsonl(base_path, LabelScheme::TwoWay);
  std::map<std::string, Label> base_label;
  for (const auto& s : base.samples) base_label[s.id] = s.label;

  std::map<Label, int> counts;
  std::set<std::string> used;
  std::size_t oracle_mismatch = 0;
  for (const auto& s : ds.samples) {
    ++counts[s.label];
    const auto rubric = rubric_from_json(s.meta.at("rubric"));
    const auto ids = s.meta.at("sub_answer_ids").get<std::vector<std::string>>();
    std::uint8_t mask = 0;
    for (int i = 0; i < 5; ++i) {
      used.insert(ids[i]);
      if (base_label.at(ids[i]) == Label::Correct) mask |= static_cast<std::uint8_t>(1U << i);
    }
    if (recheck(rubric, mask) != s.label) ++oracle_mismatch;
  }
  for (Label l : {Label::Correct, Label::PartiallyCorrect, Label::Incorrect}) {
    c.expect(std::abs(counts[l] - 1000) <= 1, std::string(to_string(l)) + " count " + std::to_string(counts[l]));
  }
  c.expect(used.size() == base.samples.size(),
           "covered " + std::to_string(used.size()) + " of " + std::to_string(base.samples.size()) + " base responses");
  c.expect(oracle_mismatch == 0, std::to_string(oracle_mismatch) + " labels differ from the oracle");
  const double secs = elapsed_s(t0);
  c.expect(secs < 30.0, "took " + fmt(secs) + " s");
  c.note("3000 samples, counts " + std::to_string(counts[Label::Correct]) + "/" +
         std::to_string(counts[Label::PartiallyCorrect]) + "/" + std::to_string(counts[Label::Incorrect]) +
         ", all 80 base responses covered, byte-identical rerun, " + fmt(secs) + " s");
  return c.outcome();
}

Outcome criterion5() {
  Checker c;
  for (auto scheme : {LabelScheme::TwoWay, LabelScheme::ThreeWay}) {
    for (Label l : labels_of(scheme)) {
      c.expect(parse_score(render_score(l, scheme), scheme) == l, "render/parse round trip");
    }
  }
  c.expect(parse_score("The answer is complete. [[2]]", LabelScheme::ThreeWay) == Label::Correct, "[[2]]");
  c.expect(parse_score("[[0]]", LabelScheme::TwoWay) == Label::Incorrect, "[[0]] 2way");
  c.expect(parse_score("first [[0]] final [[1]]", LabelScheme::ThreeWay) == Label::PartiallyCorrect,
           "last occurrence");
  bool out_of_range = false;
  try {
    parse_score("[[3]]", LabelScheme::ThreeWay);
  } catch (const ScoreParseError& e) {
    out_of_range = e.kind() == ScoreParseError::Kind::OutOfRange;
  }
  c.expect(out_of_range, "[[3]] not reported as OutOfRange");

  const auto test = import_jsonl(fixture("toy_3way_test.jsonl"), LabelScheme::ThreeWay);
  const auto train = import_jsonl(fixture("toy_3way_train.jsonl"), LabelScheme::ThreeWay);
  auto examples_in = [](const PromptText& p) {
    std::size_t n = 0;
    for (const auto& m : p.messages) {
      for (auto pos = m.content.find("\nExample "); pos != std::string::npos; pos = m.content.find("\nExample ", pos + 1)) {
        ++n;
      }
    }
    return n;
  };
  for (const auto& s : test.samples) {
    c.expect(examples_in(build_grading_prompt(s, PromptMode::rubric(), LabelScheme::ThreeWay, {})) == 0,
             "rubric prompt has examples");
    for (int k = 0; k <= kMaxExamplesPerLabel; ++k) {
      Rng rng = Rng::derive(1, static_cast<std::uint64_t>(k));
      const auto ex = select_examples(train, s.question_id, k, rng, s.id);
      const auto n = examples_in(build_grading_prompt(s, PromptMode::examples(k), LabelScheme::ThreeWay, ex));
      c.expect(n == static_cast<std::size_t>(3 * k), "k=" + std::to_string(k) + " gave " + std::to_string(n));
    }
  }
  c.note("round trips in both tiers, parse examples, 0 and 3k examples (15 at k=5)");
  return c.outcome();
}

Outcome criterion6() {
  Checker c;
  const std::vector<Label> golds{Label::Correct, Label::Correct, Label::PartiallyCorrect,
                                 Label::PartiallyCorrect, Label::Incorrect, Label::Incorrect};
  const std::vector<Label> preds{Label::Correct, Label::PartiallyCorrect, Label::PartiallyCorrect,
                                 Label::Incorrect, Label::Incorrect, Label::Correct};
  c.expect(std::abs(macro_f1(preds, golds, LabelScheme::ThreeWay) - 0.5) < 1e-12, "macro-F1 fixture");

  Rng rng(77);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto scheme = t % 2 ? LabelScheme::ThreeWay : LabelScheme::TwoWay;
    const auto labels = labels_of(scheme);
    const std::size_t m = labels.size();
    const std::size_t n = 1 + rng.below(50);
    std::vector<Label> p(n), g(n);
    std::size_t cm[3][3] = {};
    for (std::size_t i = 0; i < n; ++i) {
      const auto pi = rng.below(m), gi = rng.below(m);
      p[i] = labels[pi];
      g[i] = labels[gi];
      ++cm[gi][pi];
    }
    std::size_t diag = 0;
    double sum = 0.0;
    int present = 0;
    for (std::size_t k = 0; k < m; ++k) {
      diag += cm[k][k];
      std::size_t row = 0, col = 0;
      for (std::size_t j = 0; j < m; ++j) {
        row += cm[k][j];
        col += cm[j][k];
      }
      if (row + col == 0) continue;
      sum += static_cast<double>(2 * cm[k][k]) / static_cast<double>(row + col);
      ++present;
    }
    if (accuracy(p, g) != static_cast<double>(diag) / static_cast<double>(n)) ++mismatches;
    if (macro_f1(p, g, scheme) != sum / present) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");

  const std::vector<Label> all(40, Label::PartiallyCorrect);
  const Metric acc = [](auto p, auto g) { return accuracy(p, g); };
  const auto ci1 = bootstrap_ci(all, all, acc, 2000, 0.05, 3);
  const auto ci2 = bootstrap_ci(all, all, acc, 2000, 0.05, 3);
  c.expect(ci1.lo == 1.0 && ci1.hi == 1.0, "all-correct CI is not (1, 1)");
  std::vector<Label> noisy = golds;
  for (int i = 0; i < 5; ++i) noisy.insert(noisy.end(), preds.begin(), preds.end());
  std::vector<Label> noisy_gold;
  for (int i = 0; i < 6; ++i) noisy_gold.insert(noisy_gold.end(), golds.begin(), golds.end());
  const auto x = bootstrap_ci(noisy, noisy_gold, acc, 2000, 0.05, 3);
  const auto y = bootstrap_ci(noisy, noisy_gold, acc, 2000, 0.05, 3);
  c.expect(ci1.lo == ci2.lo && ci1.hi == ci2.hi && x.lo == y.lo && x.hi == y.hi, "bootstrap not seed-reproducible");
  c.note("1000 random instances exact, macro-F1 0.5, all-correct CI (1.0, 1.0), reproducible");
  return c.outcome();
}

Outcome criterion7() {
  Checker c;
  const auto expected = Json::parse(read_file(fixture("expected_digests.json")));
  TempDir g("acc-grade"), e("acc-eval"), d("acc-div");
  auto r = run_cli({"grade", fixture("toy_3way_test.jsonl"), "--replay", fixture("grade_replay.jsonl"), "--out",
                    g.path()});
  c.expect(r.code == 0, "grade exited " + std::to_string(r.code) + ": " + r.err);
  r = run_cli({"eval", g / "results.jsonl", "--out", e.path()});
  c.expect(r.code == 0, "eval exited " + std::to_string(r.code) + ": " + r.err);
  r = run_cli({"synth-data", fixture("toy_3way_test.jsonl"), "--method", "diversity", "--target-total", "30", "--seed",
               "7", "--replay", fixture("diversity_replay.jsonl"), "--out", d.path()});
  c.expect(r.code == 0, "synth-data exited " + std::to_string(r.code) + ": " + r.err);
  if (!c.outcome().pass) return c.outcome();

  const auto report_digest = sha256_hex(read_file(e / "report.json"));
  const auto dataset_text = read_file(d / "dataset.jsonl");
  const auto dataset_digest = sha256_hex(dataset_text);
  c.expect(report_digest == expected.at("grade_eval_report").get<std::string>(), "report digest " + report_digest);
  c.expect(dataset_digest == expected.at("diversity_dataset").get<std::string>(), "dataset digest " + dataset_digest);

  // Final labels are the relabel grades, which differ from some case targets.
  const auto ds = parse_jsonl(dataset_text, LabelScheme::ThreeWay);
  llm::ChatClient client(llm::ReplayTransport::from_file(fixture("diversity_replay.jsonl")), {});
  const auto regrade = grade_samples(client, llm::ModelConfig::grading(), ds, {});
  std::size_t differs_from_grade = 0, differs_from_target = 0;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    if (!regrade.records[i].predicted || *regrade.records[i].predicted != s.label) ++differs_from_grade;
    if (*parse_label(s.meta.at("case").at("label").get<std::string>()) != s.label) ++differs_from_target;
  }
  c.expect(differs_from_grade == 0, std::to_string(differs_from_grade) + " labels differ from relabel grades");
  c.expect(differs_from_target > 0, "no label differs from its case target");
  c.note("report and dataset digests match; " + std::to_string(ds.samples.size()) + " samples, " +
         std::to_string(differs_from_target) + " relabeled away from their case target");
  return c.outcome();
}

Outcome criterion8() {
  Checker c;
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6}, x{1, 0}, y{0, 1};
  c.expect(std::abs(cosine_similarity(a, a) - 1.0) < 1e-15, "identity");
  c.expect(cosine_similarity(x, y) == 0.0, "orthogonal");
  const double got = cosine_similarity(a, b);
  c.expect(std::abs(got - 0.974631846197) < 1e-9, "(1,2,3)~(4,5,6) = " + format_fixed(got, 12));
  const auto ds = import_jsonl(fixture("toy_same_text.jsonl"), LabelScheme::ThreeWay);
  llm::ChatClient client(llm::ReplayTransport::from_file(fixture("embeddings_replay.jsonl")), {});
  auto cfg = llm::ModelConfig::grading();
  cfg.model_name = "text-embedding-3-small";
  const auto rep = rubric_similarity_report(client, ds, cfg);
  c.expect(!rep.datasets.empty() && std::abs(rep.datasets[0].avg_rubric_vs_solution - 1.0) < 1e-12,
           "rubric = solution does not give 1.0");
  c.note("identity 1, orthogonal 0, 0.97463 case within 1e-9, rubric = solution gives 1.0");
  return c.outcome();
}

Outcome criterion9() {
  Checker c;
  const auto records = load_results(fixture("results_disagreements.jsonl"));
  const auto sheet = sample_annotation_sheet(records, AnnotationCondition::Disagreement, 50, 0);
  std::set<std::string> ids;
  for (const auto& r : sheet.rows) ids.insert(r.sample_id);
  c.expect(sheet.rows.size() == 50 && ids.size() == 50, "expected 50 distinct rows");
  const auto summary = summarize_annotations(AnnotationSheet::from_csv(read_file(fixture("sheet_complete.csv"))));
  c.expect(summary.explainability_yes == 48 && summary.n == 50 &&
               std::abs(summary.fraction(summary.explainability_yes) - 0.96) < 1e-12,
           "explainability share");
  bool rejected = false;
  try {
    summarize_annotations(AnnotationSheet::from_csv(read_file(fixture("sheet_with_blank.csv"))));
  } catch (const ValidationError&) {
    rejected = true;
  }
  c.expect(rejected, "blank row accepted");
  c.note("50 distinct rows from 60 disagreements, 96% explainability, blank rejected");
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failed;
}
