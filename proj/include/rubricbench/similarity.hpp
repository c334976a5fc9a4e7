#pragma once

#include <span>
#include <string>
#include <vector>

#include "rubricbench/dataset.hpp"
#include "rubricbench/llm_client.hpp"

namespace rubricbench {

// Texts per embeddings request.
inline constexpr std::size_t kEmbeddingBatch = 64;

// One vector per text, all of one dimension. Throws TransportError when the
// endpoint returns the wrong count or mixed dimensions.
std::vector<std::vector<double>> embed(llm::ChatClient& client, const llm::ModelConfig& cfg,
                                       const std::vector<std::string>& texts);

// dot(a,b)/(|a||b|), clamped to [-1, 1]. Throws ValidationError on a
// dimension mismatch or an all-zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct SimilarityEntry {
  std::string dataset;
  double avg_rubric_vs_solution = 0.0;
  double avg_rubric_vs_answers = 0.0;
  std::size_t n_questions = 0;
  std::size_t n_pairs = 0;  // (rubric, response) pairs
};

struct SimilarityReport {
  std::string embedding_model;
  std::vector<SimilarityEntry> datasets;  // sorted by name

  Json to_json() const;
  std::string to_markdown() const;
};

// Per question: cosine(rubric, solution) and the mean cosine(rubric, response);
// both averaged over questions, per dataset. Every question needs a rubric.
SimilarityReport rubric_similarity_report(llm::ChatClient& client, const Dataset& ds, const llm::ModelConfig& embed_cfg);

}  // namespace rubricbench
