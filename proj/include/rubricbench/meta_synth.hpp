#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/meta_rubric.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench::meta {

struct SubQuestion {
  std::string question_id;
  std::string question_text;
  std::string model_solution;
};

struct MetaQuestion {
  std::array<SubQuestion, kSubQuestions> sub_questions;
};

struct SubAnswer {
  std::string response_text;
  std::string source_sample_id;
};

struct MetaSample {
  MetaQuestion meta_question;
  MetaRubric rubric;
  std::string rubric_text;
  std::array<SubAnswer, kSubQuestions> sub_answers;
  CorrectnessVector vector;
  Label label = Label::Incorrect;
};

// Base questions usable as sub-questions: those with at least one Correct
// and one Incorrect response, in first-appearance order.
class MetaPool {
 public:
  struct Entry {
    SubQuestion question;
    std::vector<std::size_t> correct;    // indices into the base samples
    std::vector<std::size_t> incorrect;
  };

  // `base` must outlive the pool. Requires a 2way dataset.
  explicit MetaPool(const Dataset& base);

  const Dataset& base() const { return *base_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* find(std::string_view question_id) const;
  // Number of base questions left out for lacking a Correct or Incorrect response.
  std::size_t excluded() const { return excluded_; }

 private:
  const Dataset* base_;
  std::vector<Entry> entries_;
  std::size_t excluded_ = 0;
};

enum class RubricMode : std::uint8_t { RandomRubric, FixedRubric };

MetaQuestion build_meta_question(const MetaPool& pool, Rng& rng);

// Picks a vector uniformly among those the rubric grades as `target`, then a
// base response per sub-question whose label matches the vector bit.
MetaSample build_meta_answer(const MetaQuestion& mq, Label target, const MetaRubric& rubric, const MetaPool& pool,
                             Rng& rng);

struct MetaDatasetOptions {
  std::string name;  // defaults to "<base name>-meta"
  bool include_rubric = true;
  Split split = Split::Train;
};

struct MetaDatasetResult {
  Dataset dataset;
  std::vector<MetaSample> samples;
  // Base response ids that no meta sample could be made to use.
  std::vector<std::string> uncovered;
};

// Generates `n` samples with round-robin target labels, then repairs
// coverage so every eligible base response appears at least once when
// `n` allows it. Sample i draws from Rng::derive(seed, i).
MetaDatasetResult generate_meta_dataset(const Dataset& base, std::size_t n, RubricMode mode, std::uint64_t seed,
                                        const MetaDatasetOptions& options = {});

LabeledSample to_labeled_sample(const MetaSample& sample, std::size_t index, const std::string& dataset_name,
                                const MetaDatasetOptions& options);

std::string numbered_lines(const std::vector<std::string>& items);

}  // namespace rubricbench::meta
