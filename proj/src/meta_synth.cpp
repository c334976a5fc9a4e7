#include "rubricbench/meta_synth.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "rubricbench/error.hpp"
#include "rubricbench/log.hpp"

namespace rubricbench::meta {

namespace {

constexpr std::array<Label, 3> kRoundRobin = {Label::Correct, Label::PartiallyCorrect, Label::Incorrect};

std::string padded(std::size_t value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace

MetaPool::MetaPool(const Dataset& base) : base_(&base) {
  if (base.scheme != LabelScheme::TwoWay) {
    throw ValidationError("meta generation needs a 2way base dataset");
  }
  std::unordered_map<std::string_view, std::size_t> slot;
  std::vector<Entry> all;
  for (std::size_t i = 0; i < base.samples.size(); ++i) {
    const auto& s = base.samples[i];
    auto [it, inserted] = slot.emplace(s.question_id, all.size());
    if (inserted) all.push_back(Entry{{s.question_id, s.question_text, s.model_solution}, {}, {}});
    auto& entry = all[it->second];
    (s.label == Label::Correct ? entry.correct : entry.incorrect).push_back(i);
  }
  for (auto& e : all) {
    if (e.correct.empty() || e.incorrect.empty()) {
      ++excluded_;
    } else {
      entries_.push_back(std::move(e));
    }
  }
}

const MetaPool::Entry* MetaPool::find(std::string_view question_id) const {
  for (const auto& e : entries_) {
    if (e.question.question_id == question_id) return &e;
  }
  return nullptr;
}

MetaQuestion build_meta_question(const MetaPool& pool, Rng& rng) {
  const auto& entries = pool.entries();
  if (entries.size() < static_cast<std::size_t>(kSubQuestions)) {
    throw ValidationError("meta generation needs at least 5 eligible questions (each with a correct and an "
                          "incorrect response); found " +
                          std::to_string(entries.size()));
  }
  MetaQuestion mq;
  const auto picks = rng.sample_indices(entries.size(), kSubQuestions);
  for (int i = 0; i < kSubQuestions; ++i) mq.sub_questions[i] = entries[picks[i]].question;
  return mq;
}

MetaSample build_meta_answer(const MetaQuestion& mq, Label target, const MetaRubric& rubric, const MetaPool& pool,
                             Rng& rng) {
  const auto buckets = bucket_vectors(rubric);
  const auto& candidates = buckets.of(target);
  if (candidates.empty()) {
    throw ValidationError("rubric grades no correctness vector as " + std::string(to_string(target)));
  }
  MetaSample out;
  out.meta_question = mq;
  out.rubric = rubric;
  out.rubric_text = render_rubric_text(rubric);
  out.vector = candidates[rng.below(candidates.size())];
  out.label = evaluate_rubric(rubric, out.vector);

  for (int i = 0; i < kSubQuestions; ++i) {
    const auto* entry = pool.find(mq.sub_questions[i].question_id);
    if (entry == nullptr) {
      throw ValidationError("sub-question '" + mq.sub_questions[i].question_id + "' is not in the eligible pool");
    }
    const auto& choices = out.vector.correct(i + 1) ? entry->correct : entry->incorrect;
    const auto& chosen = pool.base().samples[choices[rng.below(choices.size())]];
    out.sub_answers[i] = SubAnswer{chosen.response_text, chosen.id};
  }
  return out;
}

std::string numbered_lines(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += '\n';
    out += std::to_string(i + 1) + ". " + items[i];
  }
  return out;
}

LabeledSample to_labeled_sample(const MetaSample& m, std::size_t index, const std::string& dataset_name,
                                const MetaDatasetOptions& options) {
  std::vector<std::string> questions, solutions, answers;
  Json sub_question_ids = Json::array();
  Json sub_answer_ids = Json::array();
  for (int i = 0; i < kSubQuestions; ++i) {
    questions.push_back(m.meta_question.sub_questions[i].question_text);
    solutions.push_back(m.meta_question.sub_questions[i].model_solution);
    answers.push_back(m.sub_answers[i].response_text);
    sub_question_ids.push_back(m.meta_question.sub_questions[i].question_id);
    sub_answer_ids.push_back(m.sub_answers[i].source_sample_id);
  }
  LabeledSample s;
  s.id = "meta-" + padded(index + 1, 6);
  s.dataset = dataset_name;
  s.question_id = "mq-" + padded(index + 1, 6);
  s.question_text = numbered_lines(questions);
  s.model_solution = numbered_lines(solutions);
  if (options.include_rubric) s.rubric_text = m.rubric_text;
  s.response_text = numbered_lines(answers);
  s.label = m.label;
  s.split = options.split;
  s.provenance = Provenance::Human;
  s.meta = Json{
      {"rubric", rubric_to_json(m.rubric)},
      {"vector", vector_to_json(m.vector)},
      {"sub_question_ids", sub_question_ids},
      {"sub_answer_ids", sub_answer_ids},
  };
  return s;
}

MetaDatasetResult generate_meta_dataset(const Dataset& base, std::size_t n, RubricMode mode, std::uint64_t seed,
                                        const MetaDatasetOptions& options) {
  if (n < kRoundRobin.size()) {
    throw ValidationError("n must be at least 3 so that every label appears (got " + std::to_string(n) + ")");
  }
  const MetaPool pool(base);
  if (pool.entries().size() < static_cast<std::size_t>(kSubQuestions)) {
    throw ValidationError("meta generation needs at least 5 eligible questions; found " +
                          std::to_string(pool.entries().size()));
  }

  MetaDatasetResult result;
  result.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::derive(seed, i);
    const MetaRubric rubric = mode == RubricMode::RandomRubric ? generate_meta_rubric(rng) : fixed_rubric();
    const MetaQuestion mq = build_meta_question(pool, rng);
    result.samples.push_back(build_meta_answer(mq, kRoundRobin[i % kRoundRobin.size()], rubric, pool, rng));
  }

  // Coverage repair. Each move swaps one slot's response for an unused one of
  // the same base label, so vectors and labels are untouched; the displaced
  // response is only ever one that is used elsewhere too.
  const auto& base_samples = base.samples;
  std::unordered_map<std::string_view, std::size_t> index_of;
  for (std::size_t i = 0; i < base_samples.size(); ++i) index_of.emplace(base_samples[i].id, i);
  std::vector<std::size_t> uses(base_samples.size(), 0);
  for (const auto& m : result.samples) {
    for (const auto& a : m.sub_answers) ++uses[index_of.at(a.source_sample_id)];
  }

  auto try_place = [&](std::size_t target, bool allow_question_swap) {
    const auto& r = base_samples[target];
    const bool bit = r.label == Label::Correct;
    for (auto& m : result.samples) {
      const bool has_question = std::any_of(m.meta_question.sub_questions.begin(), m.meta_question.sub_questions.end(),
                                            [&](const SubQuestion& q) { return q.question_id == r.question_id; });
      for (int j = 0; j < kSubQuestions; ++j) {
        if (m.vector.correct(j + 1) != bit) continue;
        auto& slot = m.sub_answers[j];
        const std::size_t current = index_of.at(slot.source_sample_id);
        if (uses[current] < 2) continue;
        const bool same_question = m.meta_question.sub_questions[j].question_id == r.question_id;
        if (!same_question && !(allow_question_swap && !has_question)) continue;
        if (!same_question) {
          m.meta_question.sub_questions[j] = SubQuestion{r.question_id, r.question_text, r.model_solution};
        }
        --uses[current];
        ++uses[target];
        slot = SubAnswer{r.response_text, r.id};
        return true;
      }
    }
    return false;
  };

  for (const auto& entry : pool.entries()) {
    for (const auto* list : {&entry.correct, &entry.incorrect}) {
      for (std::size_t idx : *list) {
        if (uses[idx] > 0) continue;
        if (!try_place(idx, false) && !try_place(idx, true)) result.uncovered.push_back(base_samples[idx].id);
      }
    }
  }
  if (!result.uncovered.empty()) {
    std::string ids;
    for (const auto& id : result.uncovered) ids += (ids.empty() ? "" : ", ") + id;
    warn("n=" + std::to_string(n) + " is too small to cover every base response; uncovered: " + ids);
  }

  result.dataset.name = options.name.empty() ? base.name + "-meta" : options.name;
  result.dataset.scheme = LabelScheme::ThreeWay;
  result.dataset.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.dataset.samples.push_back(to_labeled_sample(result.samples[i], i, result.dataset.name, options));
  }
  result.dataset.rubric_kind = infer_rubric_kind(result.dataset.samples);
  return result;
}

}  // namespace rubricbench::meta
