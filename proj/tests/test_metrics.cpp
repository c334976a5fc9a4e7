#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "rubricbench/metrics.hpp"
#include "rubricbench/random.hpp"

using namespace rubricbench;

namespace {

constexpr Label C = Label::Correct;
constexpr Label P = Label::PartiallyCorrect;
constexpr Label I = Label::Incorrect;

// Confusion-matrix reference implementation.
struct Oracle {
  double accuracy;
  double macro;
};

Oracle oracle(const std::vector<Label>& preds, const std::vector<Label>& golds, LabelScheme scheme) {
  const auto labels = labels_of(scheme);
  const std::size_t m = labels.size();
  auto index = [&](Label l) {
    for (std::size_t i = 0; i < m; ++i) {
      if (labels[i] == l) return i;
    }
    return m;
  };
  std::array<std::array<std::size_t, 3>, 3> cm{};
  for (std::size_t i = 0; i < preds.size(); ++i) ++cm[index(golds[i])][index(preds[i])];
  std::size_t diag = 0;
  for (std::size_t i = 0; i < m; ++i) diag += cm[i][i];
  double sum = 0.0;
  int present = 0;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < m; ++j) {
      row += cm[k][j];
      col += cm[j][k];
    }
    if (row + col == 0) continue;
    const std::size_t tp = cm[k][k];
    sum += static_cast<double>(2 * tp) / static_cast<double>(2 * tp + (col - tp) + (row - tp));
    ++present;
  }
  return {static_cast<double>(diag) / static_cast<double>(preds.size()), sum / present};
}

GradingRecord rec(std::string id, Label pred, Label gold, LabelScheme scheme = LabelScheme::ThreeWay) {
  GradingRecord r;
  r.id = std::move(id);
  r.question_id = "q";
  r.scheme = scheme;
  r.predicted = pred;
  r.gold = gold;
  return r;
}

const Metric kAccuracy = [](auto p, auto g) { return accuracy(p, g); };

}  // namespace

TEST_CASE("hand-computed macro-F1 fixture") {
  const std::vector<Label> golds{C, C, P, P, I, I};
  const std::vector<Label> preds{C, P, P, I, I, C};
  const auto prf = per_label_prf(preds, golds, LabelScheme::ThreeWay);
  for (const auto& r : prf) CHECK(r.f1 == doctest::Approx(0.5));
  CHECK(macro_f1(preds, golds, LabelScheme::ThreeWay) == doctest::Approx(0.5));
  CHECK(accuracy(preds, golds) == doctest::Approx(0.5));
}

TEST_CASE("single-class predictions") {
  const std::vector<Label> golds{C, P, I};
  const std::vector<Label> preds{C, C, C};
  CHECK(macro_f1(preds, golds, LabelScheme::ThreeWay) == doctest::Approx(1.0 / 6.0));
  CHECK(macro_f1(preds, golds, LabelScheme::ThreeWay) == oracle(preds, golds, LabelScheme::ThreeWay).macro);
}

TEST_CASE("labels absent from both sides are left out of the macro average") {
  const std::vector<Label> v{C, C, I};
  CHECK(macro_f1(v, v, LabelScheme::ThreeWay) == 1.0);
}

TEST_CASE("agreement with the confusion-matrix oracle") {
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const auto scheme = t % 2 ? LabelScheme::ThreeWay : LabelScheme::TwoWay;
    const auto labels = labels_of(scheme);
    const std::size_t n = 1 + rng.below(40);
    std::vector<Label> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = labels[rng.below(labels.size())];
      g[i] = labels[rng.below(labels.size())];
    }
    const auto o = oracle(p, g, scheme);
    REQUIRE(accuracy(p, g) == o.accuracy);
    REQUIRE(macro_f1(p, g, scheme) == o.macro);
  }
}

TEST_CASE("input errors") {
  const std::vector<Label> a{C}, b{C, I}, none;
  CHECK_THROWS_AS(accuracy(a, b), ValidationError);
  CHECK_THROWS_AS(accuracy(none, none), ValidationError);
  CHECK_THROWS_AS(bootstrap_ci(a, a, kAccuracy, 50), ValidationError);
  CHECK_THROWS_AS(bootstrap_ci(a, a, kAccuracy, 200, 1.5), ValidationError);
}

TEST_CASE("bootstrap on an all-correct run") {
  const std::vector<Label> v{C, P, I, C, P, I, C, C};
  const auto ci = bootstrap_ci(v, v, kAccuracy, 2000, 0.05, 1);
  CHECK(ci.lo == 1.0);
  CHECK(ci.hi == 1.0);
}

TEST_CASE("bootstrap is seed-reproducible and brackets the estimate") {
  Rng rng(5);
  std::vector<Label> p(200), g(200);
  for (std::size_t i = 0; i < 200; ++i) {
    g[i] = labels_of(LabelScheme::ThreeWay)[rng.below(3)];
    p[i] = rng.below(10) < 7 ? g[i] : labels_of(LabelScheme::ThreeWay)[rng.below(3)];
  }
  const auto a = bootstrap_ci(p, g, kAccuracy, 2000, 0.05, 9);
  const auto b = bootstrap_ci(p, g, kAccuracy, 2000, 0.05, 9);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  const double point = accuracy(p, g);
  CHECK(a.lo <= point);
  CHECK(point <= a.hi);
  CHECK(a.hi - a.lo < 0.2);
  const auto narrow = bootstrap_ci(p, g, kAccuracy, 2000, 0.5, 9);
  CHECK(narrow.hi - narrow.lo < a.hi - a.lo);

  // Four times the data roughly halves the width.
  std::vector<Label> p4, g4;
  for (int r = 0; r < 4; ++r) {
    p4.insert(p4.end(), p.begin(), p.end());
    g4.insert(g4.end(), g.begin(), g.end());
  }
  const auto wide = bootstrap_ci(p4, g4, kAccuracy, 2000, 0.05, 9);
  CHECK(wide.hi - wide.lo < a.hi - a.lo);
}

TEST_CASE("quantile interpolation") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("evaluate excludes unscored records") {
  std::vector<GradingRecord> records{rec("a", C, C), rec("b", I, C), rec("c", P, P)};
  auto unscored = rec("d", C, I);
  unscored.predicted.reset();
  records.push_back(unscored);
  const auto report = evaluate(records, {500, 0.05, 0});
  CHECK(report.n == 3);
  CHECK(report.n_unscored == 1);
  CHECK(report.accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(report.per_question.at("q").n == 3);
  const auto j = report.to_json();
  CHECK(j.at("n_unscored") == 1);
  CHECK(report.to_markdown(true).find("| q | 3 |") != std::string::npos);

  CHECK_THROWS_AS(evaluate({}), ValidationError);
  CHECK_THROWS_AS(evaluate({unscored}), ValidationError);
  CHECK_THROWS_AS(evaluate({rec("a", C, C), rec("b", C, C, LabelScheme::TwoWay)}), ValidationError);
}

TEST_CASE("fixed formatting") {
  CHECK(format_fixed(0.5) == "0.5000");
  CHECK(format_fixed(2.0 / 3.0, 2) == "0.67");
}
