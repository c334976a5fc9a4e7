#include "rubricbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rubricbench/random.hpp"

namespace rubricbench {

namespace {

void check_inputs(std::span<const Label> preds, std::span<const Label> golds) {
  if (preds.size() != golds.size()) {
    throw ValidationError("prediction/gold length mismatch: " + std::to_string(preds.size()) + " vs " +
                          std::to_string(golds.size()));
  }
  if (preds.empty()) throw ValidationError("cannot score an empty set of predictions");
}

}  // namespace

double accuracy(std::span<const Label> preds, std::span<const Label> golds) {
  check_inputs(preds, golds);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == golds[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

std::vector<LabelPrf> per_label_prf(std::span<const Label> preds, std::span<const Label> golds, LabelScheme scheme) {
  check_inputs(preds, golds);
  std::vector<LabelPrf> out;
  for (Label label : labels_of(scheme)) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const bool p = preds[i] == label;
      const bool g = golds[i] == label;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    LabelPrf r;
    r.label = label;
    r.support = tp + fn;
    r.predicted = tp + fp;
    r.present = r.support + r.predicted > 0;
    r.precision = r.predicted ? static_cast<double>(tp) / static_cast<double>(r.predicted) : 0.0;
    r.recall = r.support ? static_cast<double>(tp) / static_cast<double>(r.support) : 0.0;
    const std::size_t denom = 2 * tp + fp + fn;
    r.f1 = denom ? static_cast<double>(2 * tp) / static_cast<double>(denom) : 0.0;
    out.push_back(r);
  }
  return out;
}

double macro_f1(std::span<const Label> preds, std::span<const Label> golds, LabelScheme scheme) {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : per_label_prf(preds, golds, scheme)) {
    if (!r.present) continue;
    sum += r.f1;
    ++count;
  }
  return sum / count;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Interval bootstrap_ci(std::span<const Label> preds, std::span<const Label> golds, const Metric& metric,
                      int resamples, double alpha, std::uint64_t seed) {
  check_inputs(preds, golds);
  if (resamples < 100) throw ValidationError("bootstrap needs at least 100 resamples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  const std::size_t n = preds.size();
  Rng rng(seed);
  std::vector<Label> p(n), g(n);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(rng.below(n));
      p[i] = preds[j];
      g[i] = golds[j];
    }
    values.push_back(metric(p, g));
  }
  std::sort(values.begin(), values.end());
  Interval ci{quantile_sorted(values, alpha / 2.0), quantile_sorted(values, 1.0 - alpha / 2.0)};
  const double point = metric(preds, golds);
  ci.lo = std::min(ci.lo, point);
  ci.hi = std::max(ci.hi, point);
  return ci;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

EvalReport evaluate(const std::vector<GradingRecord>& records, const EvalOptions& options) {
  if (records.empty()) throw ValidationError("no grading records to evaluate");
  EvalReport rep;
  rep.options = options;
  rep.scheme = records.front().scheme;
  std::vector<Label> preds, golds;
  for (const auto& r : records) {
    if (r.scheme != rep.scheme) throw ValidationError("records mix 2way and 3way schemes (record " + r.id + ")");
    if (!r.scored()) {
      ++rep.n_unscored;
      continue;
    }
    preds.push_back(*r.predicted);
    golds.push_back(r.gold);
    auto& q = rep.per_question[r.question_id];
    ++q.n;
    q.correct += *r.predicted == r.gold ? 1 : 0;
  }
  if (preds.empty()) {
    throw ValidationError("all " + std::to_string(records.size()) + " records are unscored; nothing to evaluate");
  }
  for (auto& [_, q] : rep.per_question) q.accuracy = static_cast<double>(q.correct) / static_cast<double>(q.n);

  const LabelScheme scheme = rep.scheme;
  rep.n = preds.size();
  rep.accuracy = accuracy(preds, golds);
  rep.macro_f1 = macro_f1(preds, golds, scheme);
  rep.per_label = per_label_prf(preds, golds, scheme);
  rep.accuracy_ci = bootstrap_ci(
      preds, golds, [](auto p, auto g) { return accuracy(p, g); }, options.resamples, options.alpha, options.seed);
  rep.f1_ci = bootstrap_ci(
      preds, golds, [scheme](auto p, auto g) { return macro_f1(p, g, scheme); }, options.resamples, options.alpha,
      options.seed);
  return rep;
}

Json EvalReport::to_json() const {
  Json labels = Json::array();
  for (const auto& r : per_label) {
    labels.push_back({{"label", to_string(r.label)},
                      {"precision", r.precision},
                      {"recall", r.recall},
                      {"f1", r.f1},
                      {"support", r.support},
                      {"predicted", r.predicted},
                      {"present", r.present}});
  }
  Json questions = Json::object();
  for (const auto& [qid, q] : per_question) {
    questions[qid] = {{"n", q.n}, {"correct", q.correct}, {"accuracy", q.accuracy}};
  }
  return Json{{"scheme", to_string(scheme)},
              {"n", n},
              {"n_unscored", n_unscored},
              {"accuracy", accuracy},
              {"macro_f1", macro_f1},
              {"accuracy_ci", {accuracy_ci.lo, accuracy_ci.hi}},
              {"f1_ci", {f1_ci.lo, f1_ci.hi}},
              {"confidence", 1.0 - options.alpha},
              {"resamples", options.resamples},
              {"seed", options.seed},
              {"per_label", labels},
              {"per_question", questions}};
}

std::string EvalReport::to_markdown(bool by_question) const {
  const std::string conf = format_fixed((1.0 - options.alpha) * 100.0, 0) + "%";
  std::string out;
  out += "| metric | value | " + conf + " CI |\n|---|---|---|\n";
  out += "| accuracy | " + format_fixed(accuracy) + " | [" + format_fixed(accuracy_ci.lo) + ", " +
         format_fixed(accuracy_ci.hi) + "] |\n";
  out += "| macro-F1 | " + format_fixed(macro_f1) + " | [" + format_fixed(f1_ci.lo) + ", " + format_fixed(f1_ci.hi) +
         "] |\n";
  out += "\nscored: " + std::to_string(n) + ", unscored: " + std::to_string(n_unscored) + "\n\n";
  out += "| label | precision | recall | F1 | support |\n|---|---|---|---|---|\n";
  for (const auto& r : per_label) {
    out += "| " + std::string(display_name(r.label)) + " | " + format_fixed(r.precision) + " | " +
           format_fixed(r.recall) + " | " + format_fixed(r.f1) + " | " + std::to_string(r.support) + " |\n";
  }
  if (by_question) {
    out += "\n| question | n | accuracy |\n|---|---|---|\n";
    for (const auto& [qid, q] : per_question) {
      out += "| " + qid + " | " + std::to_string(q.n) + " | " + format_fixed(q.accuracy) + " |\n";
    }
  }
  return out;
}

}  // namespace rubricbench
