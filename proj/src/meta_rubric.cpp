#include "rubricbench/meta_rubric.hpp"

#include <algorithm>

#include "rubricbench/error.hpp"

namespace rubricbench::meta {

namespace {

constexpr int kMaxRubricAttempts = 1000;

bool meets(const LevelCriterion& criterion, CorrectnessVector v) {
  return v.count_correct() >= criterion.min_correct &&
         (v.mask() & criterion.required.mask()) == criterion.required.mask();
}

// Uniform subset of size `k` drawn from the numbers not in `exclude`.
QuestionSet random_subset(Rng& rng, int k, QuestionSet exclude) {
  std::vector<int> pool;
  for (int q = 1; q <= kSubQuestions; ++q) {
    if (!exclude.contains(q)) pool.push_back(q);
  }
  std::uint8_t mask = exclude.mask();
  for (std::size_t idx : rng.sample_indices(pool.size(), static_cast<std::size_t>(k))) {
    mask |= static_cast<std::uint8_t>(1U << (pool[idx] - 1));
  }
  return QuestionSet::from_mask(mask);
}

std::string count_word(int n) {
  static constexpr const char* kWords[] = {"zero", "one", "two", "three", "four", "five"};
  return n >= 0 && n <= 5 ? kWords[n] : std::to_string(n);
}

std::string question_list(QuestionSet set) {
  const auto nums = set.numbers();
  std::string out;
  for (std::size_t i = 0; i < nums.size(); ++i) {
    if (i > 0) {
      if (nums.size() == 2) {
        out += " and ";
      } else {
        out += i + 1 == nums.size() ? ", and " : ", ";
      }
    }
    out += "Question " + std::to_string(nums[i]);
  }
  return out;
}

}  // namespace

QuestionSet QuestionSet::of(std::initializer_list<int> numbers) {
  std::uint8_t mask = 0;
  for (int n : numbers) {
    if (n < 1 || n > kSubQuestions) throw ValidationError("sub-question number out of range 1..5");
    mask |= static_cast<std::uint8_t>(1U << (n - 1));
  }
  return QuestionSet(mask);
}

std::vector<int> QuestionSet::numbers() const {
  std::vector<int> out;
  for (int q = 1; q <= kSubQuestions; ++q) {
    if (contains(q)) out.push_back(q);
  }
  return out;
}

CorrectnessVector CorrectnessVector::from_bools(const std::array<bool, kSubQuestions>& bits) {
  std::uint8_t mask = 0;
  for (int i = 0; i < kSubQuestions; ++i) {
    if (bits[i]) mask |= static_cast<std::uint8_t>(1U << i);
  }
  return CorrectnessVector(mask);
}

std::array<bool, kSubQuestions> CorrectnessVector::to_bools() const {
  std::array<bool, kSubQuestions> out{};
  for (int i = 0; i < kSubQuestions; ++i) out[i] = correct(i + 1);
  return out;
}

Label evaluate_rubric(const MetaRubric& rubric, CorrectnessVector v) {
  if (meets(rubric.correct, v)) return Label::Correct;
  if (meets(rubric.partially_correct, v)) return Label::PartiallyCorrect;
  return Label::Incorrect;
}

const std::vector<CorrectnessVector>& VectorBuckets::of(Label label) const {
  switch (label) {
    case Label::Correct: return correct;
    case Label::PartiallyCorrect: return partially_correct;
    case Label::Incorrect: return incorrect;
  }
  return incorrect;
}

VectorBuckets bucket_vectors(const MetaRubric& rubric) {
  VectorBuckets b;
  for (int m = 0; m < kVectorCount; ++m) {
    auto v = CorrectnessVector::from_mask(static_cast<std::uint8_t>(m));
    switch (evaluate_rubric(rubric, v)) {
      case Label::Correct: b.correct.push_back(v); break;
      case Label::PartiallyCorrect: b.partially_correct.push_back(v); break;
      case Label::Incorrect: b.incorrect.push_back(v); break;
    }
  }
  return b;
}

std::vector<std::string> rubric_violations(const MetaRubric& r) {
  std::vector<std::string> out;
  for (const auto* level : {&r.correct, &r.partially_correct}) {
    const char* name = level == &r.correct ? "correct" : "partially_correct";
    if (level->min_correct < 1 || level->min_correct > kSubQuestions) {
      out.push_back(std::string(name) + ": min_correct must lie in 1..5");
    }
    if (level->min_correct <= level->required.size()) {
      out.push_back(std::string(name) + ": min_correct must exceed the number of required questions");
    }
  }
  if (r.correct.min_correct <= r.partially_correct.min_correct) {
    out.push_back("correct.min_correct must exceed partially_correct.min_correct");
  }
  if (!r.partially_correct.required.is_proper_subset_of(r.correct.required)) {
    out.push_back("partially_correct.required must be a proper subset of correct.required");
  }
  if (out.empty()) {
    const auto b = bucket_vectors(r);
    if (b.correct.empty() || b.partially_correct.empty() || b.incorrect.empty()) {
      out.push_back("every label must be reachable by some correctness vector");
    }
  }
  return out;
}

bool is_valid(const MetaRubric& rubric) { return rubric_violations(rubric).empty(); }

MetaRubric fixed_rubric() {
  return MetaRubric{
      .correct = {.min_correct = 4, .required = QuestionSet::of({1, 2, 3})},
      .partially_correct = {.min_correct = 3, .required = QuestionSet::of({1, 2})},
  };
}

MetaRubric generate_meta_rubric(Rng& rng) {
  for (int attempt = 0; attempt < kMaxRubricAttempts; ++attempt) {
    MetaRubric r;
    r.partially_correct.min_correct = static_cast<int>(rng.between(2, 3));
    r.correct.min_correct = static_cast<int>(rng.between(r.partially_correct.min_correct + 1, kSubQuestions));
    const int partial_size = static_cast<int>(rng.between(1, r.partially_correct.min_correct - 1));
    r.partially_correct.required = random_subset(rng, partial_size, QuestionSet{});
    const int correct_size = static_cast<int>(rng.between(partial_size + 1, r.correct.min_correct - 1));
    r.correct.required = random_subset(rng, correct_size - partial_size, r.partially_correct.required);
    if (is_valid(r)) return r;
  }
  throw Error("failed to sample a valid meta rubric");
}

std::string render_rubric_text(const MetaRubric& r) {
  std::string text = "- Correct: If the total number of correct answers is at least " + count_word(r.correct.min_correct);
  if (!r.correct.required.empty()) {
    text += " and all of the following questions are answered correctly: " + question_list(r.correct.required);
  }
  text += ".\n- Partially Correct: If the criteria for correct are not met, but the total number of correct answers is at least " +
          count_word(r.partially_correct.min_correct);
  if (!r.partially_correct.required.empty()) {
    text += " and the following questions are answered correctly: " + question_list(r.partially_correct.required);
  }
  text += ".\n- Incorrect: Otherwise.";
  return text;
}

Json rubric_to_json(const MetaRubric& r) {
  return Json{
      {"correct", {{"min", r.correct.min_correct}, {"required", r.correct.required.numbers()}}},
      {"partially_correct",
       {{"min", r.partially_correct.min_correct}, {"required", r.partially_correct.required.numbers()}}},
  };
}

MetaRubric rubric_from_json(const Json& j) {
  auto level = [&](const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("rubric is missing '") + key + "'");
    const auto& node = j.at(key);
    LevelCriterion c;
    c.min_correct = node.at("min").get<int>();
    std::uint8_t mask = 0;
    for (int q : node.at("required").get<std::vector<int>>()) {
      if (q < 1 || q > kSubQuestions) throw ValidationError("rubric question number out of range 1..5");
      mask |= static_cast<std::uint8_t>(1U << (q - 1));
    }
    c.required = QuestionSet::from_mask(mask);
    return c;
  };
  return MetaRubric{.correct = level("correct"), .partially_correct = level("partially_correct")};
}

Json vector_to_json(CorrectnessVector v) {
  Json arr = Json::array();
  for (bool b : v.to_bools()) arr.push_back(b);
  return arr;
}

CorrectnessVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.size() != kSubQuestions) throw ValidationError("correctness vector must hold 5 booleans");
  std::array<bool, kSubQuestions> bits{};
  for (int i = 0; i < kSubQuestions; ++i) bits[i] = j.at(i).get<bool>();
  return CorrectnessVector::from_bools(bits);
}

std::vector<MetaRubric> enumerate_sampling_space() {
  std::vector<MetaRubric> out;
  for (int pmin = 2; pmin <= 3; ++pmin) {
    for (int cmin = pmin + 1; cmin <= kSubQuestions; ++cmin) {
      for (int pmask = 1; pmask < kVectorCount; ++pmask) {
        const auto preq = QuestionSet::from_mask(static_cast<std::uint8_t>(pmask));
        if (preq.size() > pmin - 1) continue;
        for (int cmask = 1; cmask < kVectorCount; ++cmask) {
          const auto creq = QuestionSet::from_mask(static_cast<std::uint8_t>(cmask));
          if (!preq.is_proper_subset_of(creq) || creq.size() > cmin - 1) continue;
          out.push_back(MetaRubric{{cmin, creq}, {pmin, preq}});
        }
      }
    }
  }
  return out;
}

}  // namespace rubricbench::meta
