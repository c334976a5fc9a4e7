#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/label.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench::meta {

inline constexpr int kSubQuestions = 5;
inline constexpr int kVectorCount = 1 << kSubQuestions;

// Set of sub-question numbers 1..5; number i is bit (i - 1).
class QuestionSet {
 public:
  constexpr QuestionSet() = default;
  static constexpr QuestionSet from_mask(std::uint8_t mask) { return QuestionSet(static_cast<std::uint8_t>(mask & 0x1F)); }
  static QuestionSet of(std::initializer_list<int> numbers);

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool contains(int number) const { return (mask_ >> (number - 1)) & 1U; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool is_subset_of(QuestionSet other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool is_proper_subset_of(QuestionSet other) const { return is_subset_of(other) && mask_ != other.mask_; }
  std::vector<int> numbers() const;

  friend constexpr bool operator==(QuestionSet, QuestionSet) = default;

 private:
  constexpr explicit QuestionSet(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

// Which of the five sub-answers are correct; bit (i - 1) is sub-answer i.
class CorrectnessVector {
 public:
  constexpr CorrectnessVector() = default;
  static constexpr CorrectnessVector from_mask(std::uint8_t mask) {
    return CorrectnessVector(static_cast<std::uint8_t>(mask & 0x1F));
  }
  static CorrectnessVector from_bools(const std::array<bool, kSubQuestions>& bits);

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool correct(int number) const { return (mask_ >> (number - 1)) & 1U; }
  constexpr int count_correct() const { return std::popcount(mask_); }
  std::array<bool, kSubQuestions> to_bools() const;

  friend constexpr bool operator==(CorrectnessVector, CorrectnessVector) = default;

 private:
  constexpr explicit CorrectnessVector(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

// Criterion for one label level: a minimum count of correct sub-answers plus
// a set of sub-questions that must all be correct.
struct LevelCriterion {
  int min_correct = 1;
  QuestionSet required;

  friend bool operator==(const LevelCriterion&, const LevelCriterion&) = default;
};

// Three-level rubric over a meta-answer. Incorrect is the fallback level.
struct MetaRubric {
  LevelCriterion correct;
  LevelCriterion partially_correct;

  friend bool operator==(const MetaRubric&, const MetaRubric&) = default;
};

Label evaluate_rubric(const MetaRubric& rubric, CorrectnessVector v);

// Vectors grouped by the label they grade to, in ascending mask order.
struct VectorBuckets {
  std::vector<CorrectnessVector> correct;
  std::vector<CorrectnessVector> partially_correct;
  std::vector<CorrectnessVector> incorrect;

  const std::vector<CorrectnessVector>& of(Label label) const;
};

VectorBuckets bucket_vectors(const MetaRubric& rubric);

// Human-readable descriptions of every violated invariant; empty when valid.
std::vector<std::string> rubric_violations(const MetaRubric& rubric);
bool is_valid(const MetaRubric& rubric);

// Baseline rubric shared by every sample of a fixed-rubric dataset:
// Correct needs 4 correct including 1-3, Partially Correct needs 3 including 1-2.
MetaRubric fixed_rubric();

// Draws a rubric satisfying every invariant, resampling until all three
// label buckets are reachable.
MetaRubric generate_meta_rubric(Rng& rng);

// Bullet-list text mirroring the wording used for meta-question rubrics.
std::string render_rubric_text(const MetaRubric& rubric);

Json rubric_to_json(const MetaRubric& rubric);
MetaRubric rubric_from_json(const Json& j);

Json vector_to_json(CorrectnessVector v);
CorrectnessVector vector_from_json(const Json& j);

// Every rubric reachable by generate_meta_rubric, valid or not for the
// bucket condition; used to reason about the sampling space.
std::vector<MetaRubric> enumerate_sampling_space();

}  // namespace rubricbench::meta
