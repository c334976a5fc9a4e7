#include "rubricbench/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rubricbench/metrics.hpp"
#include "rubricbench/simd/kernels.hpp"

namespace rubricbench {

namespace {

double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<std::vector<double>> embed(llm::ChatClient& client, const llm::ModelConfig& cfg,
                                       const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  const std::size_t n_batches = (texts.size() + kEmbeddingBatch - 1) / kEmbeddingBatch;
  std::vector<std::vector<std::vector<double>>> batches(n_batches);
  client.parallel_for(n_batches, [&](std::size_t b) {
    llm::EmbeddingRequest req;
    req.model_name = cfg.model_name;
    const auto first = b * kEmbeddingBatch;
    const auto last = std::min(texts.size(), first + kEmbeddingBatch);
    req.inputs.assign(texts.begin() + static_cast<std::ptrdiff_t>(first), texts.begin() + static_cast<std::ptrdiff_t>(last));
    batches[b] = client.embeddings(cfg, req);
    if (batches[b].size() != req.inputs.size()) {
      throw TransportError("embeddings endpoint returned " + std::to_string(batches[b].size()) + " vectors for " +
                           std::to_string(req.inputs.size()) + " texts");
    }
  });
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (auto& batch : batches) {
    for (auto& v : batch) out.push_back(std::move(v));
  }
  const auto dim = out.front().size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].empty() || out[i].size() != dim) {
      throw TransportError("embedding " + std::to_string(i) + " has dimension " + std::to_string(out[i].size()) +
                           ", expected " + std::to_string(dim));
    }
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("cosine similarity of vectors with dimensions " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  }
  const auto r = simd::dot_norms(a.data(), b.data(), a.size());
  if (r.norm_a_sq == 0.0 || r.norm_b_sq == 0.0) throw ValidationError("cosine similarity of a zero vector");
  const double c = r.dot / std::sqrt(r.norm_a_sq * r.norm_b_sq);
  return std::clamp(c, -1.0, 1.0);
}

SimilarityReport rubric_similarity_report(llm::ChatClient& client, const Dataset& ds,
                                          const llm::ModelConfig& embed_cfg) {
  struct Question {
    std::string rubric;
    std::string solution;
    std::vector<std::string> responses;
  };
  // dataset -> question id -> texts
  std::map<std::string, std::map<std::string, Question>> grouped;
  std::set<std::string> unique;
  for (const auto& s : ds.samples) {
    if (!s.rubric_text || s.rubric_text->find_first_not_of(" \t\r\n") == std::string::npos) {
      throw ValidationError("similarity report needs a rubric, but question '" + s.question_id + "' has none");
    }
    auto& q = grouped[s.dataset][s.question_id];
    q.rubric = *s.rubric_text;
    q.solution = s.model_solution;
    q.responses.push_back(s.response_text);
    unique.insert(*s.rubric_text);
    unique.insert(s.model_solution);
    unique.insert(s.response_text);
  }
  const std::vector<std::string> texts(unique.begin(), unique.end());
  const auto vectors = embed(client, embed_cfg, texts);
  auto vec = [&](const std::string& t) -> const std::vector<double>& {
    return vectors[static_cast<std::size_t>(std::lower_bound(texts.begin(), texts.end(), t) - texts.begin())];
  };

  SimilarityReport rep;
  rep.embedding_model = embed_cfg.model_name;
  for (const auto& [name, questions] : grouped) {
    SimilarityEntry e;
    e.dataset = name;
    std::vector<double> vs_solution, vs_answers;
    for (const auto& [qid, q] : questions) {
      const auto& r = vec(q.rubric);
      vs_solution.push_back(cosine_similarity(r, vec(q.solution)));
      std::vector<double> per_response;
      for (const auto& resp : q.responses) per_response.push_back(cosine_similarity(r, vec(resp)));
      e.n_pairs += per_response.size();
      vs_answers.push_back(sorted_mean(std::move(per_response)));
    }
    e.n_questions = questions.size();
    e.avg_rubric_vs_solution = sorted_mean(std::move(vs_solution));
    e.avg_rubric_vs_answers = sorted_mean(std::move(vs_answers));
    rep.datasets.push_back(e);
  }
  return rep;
}

Json SimilarityReport::to_json() const {
  Json rows = Json::array();
  for (const auto& e : datasets) {
    rows.push_back({{"dataset", e.dataset},
                    {"avg_rubric_vs_solution", e.avg_rubric_vs_solution},
                    {"avg_rubric_vs_answers", e.avg_rubric_vs_answers},
                    {"n_questions", e.n_questions},
                    {"n_pairs", e.n_pairs}});
  }
  return Json{{"embedding_model", embedding_model}, {"datasets", rows}};
}

std::string SimilarityReport::to_markdown() const {
  std::string out = "| dataset | rubric vs solution | rubric vs answers | questions | pairs |\n|---|---|---|---|---|\n";
  for (const auto& e : datasets) {
    out += "| " + e.dataset + " | " + format_fixed(e.avg_rubric_vs_solution) + " | " +
           format_fixed(e.avg_rubric_vs_answers) + " | " + std::to_string(e.n_questions) + " | " +
           std::to_string(e.n_pairs) + " |\n";
  }
  return out;
}

}  // namespace rubricbench
