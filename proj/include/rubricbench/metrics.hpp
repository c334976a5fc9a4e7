#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/grading.hpp"

namespace rubricbench {

// Fraction of exact matches. Throws ValidationError on empty or unequal input.
double accuracy(std::span<const Label> preds, std::span<const Label> golds);

struct LabelPrf {
  Label label = Label::Incorrect;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  bool present = false;       // appears in preds or golds
};

std::vector<LabelPrf> per_label_prf(std::span<const Label> preds, std::span<const Label> golds, LabelScheme scheme);

// Mean per-label F1 over the scheme's labels that occur in preds or golds.
double macro_f1(std::span<const Label> preds, std::span<const Label> golds, LabelScheme scheme);

using Metric = std::function<double(std::span<const Label>, std::span<const Label>)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr int kDefaultBootstrapResamples = 2000;
inline constexpr double kDefaultAlpha = 0.05;

// Percentile bootstrap over n-out-of-n resamples of (pred, gold) pairs.
// The interval is widened to include the full-sample estimate if needed.
Interval bootstrap_ci(std::span<const Label> preds, std::span<const Label> golds, const Metric& metric,
                      int resamples = kDefaultBootstrapResamples, double alpha = kDefaultAlpha,
                      std::uint64_t seed = 0);

// Linear-interpolated quantile of sorted values, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct EvalOptions {
  int resamples = kDefaultBootstrapResamples;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
};

struct QuestionAccuracy {
  std::size_t n = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  LabelScheme scheme = LabelScheme::ThreeWay;
  std::size_t n = 0;  // scored
  std::size_t n_unscored = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  Interval accuracy_ci;
  Interval f1_ci;
  std::vector<LabelPrf> per_label;
  std::map<std::string, QuestionAccuracy> per_question;
  EvalOptions options;

  Json to_json() const;
  std::string to_markdown(bool by_question = false) const;
};

// Unscored records are counted and excluded. Throws ValidationError when no
// scored record remains or the records mix schemes.
EvalReport evaluate(const std::vector<GradingRecord>& records, const EvalOptions& options = {});

std::string format_fixed(double value, int digits = 4);

}  // namespace rubricbench
