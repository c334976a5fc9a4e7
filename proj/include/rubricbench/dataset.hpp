#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rubricbench/label.hpp"

namespace rubricbench {

using Json = nlohmann::json;

enum class Split : std::uint8_t { Train, Val, Test };
enum class Provenance : std::uint8_t { Human, LlmLabeled, LlmGenerated };
enum class RubricKind : std::uint8_t { None, LabelLevel, QuestionSpecific };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view text);
std::string_view to_string(Provenance provenance);
std::optional<Provenance> parse_provenance(std::string_view text);
std::string_view to_string(RubricKind kind);

// Metadata keys naming the model behind a synthetic record.
inline constexpr const char* kGeneratorModelKey = "generator_model";
inline constexpr const char* kLabelerModelKey = "labeler_model";

struct LabeledSample {
  std::string id;
  std::string dataset;
  std::string question_id;
  std::string question_text;
  std::string model_solution;
  std::optional<std::string> rubric_text;
  std::string response_text;
  Label label = Label::Incorrect;
  Split split = Split::Train;
  Provenance provenance = Provenance::Human;
  Json meta = Json::object();

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct Dataset {
  std::string name;
  LabelScheme scheme = LabelScheme::ThreeWay;
  std::vector<LabeledSample> samples;
  RubricKind rubric_kind = RubricKind::None;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct TokenStats {
  double mean = 0.0;
  double median = 0.0;
  std::int64_t min = 0;
  std::int64_t max = 0;
  std::int64_t n_questions = 0;
  std::int64_t n_responses = 0;
};

struct ImportOptions {
  // Interpret `label` as a five-way source label and collapse it to the scheme.
  bool five_way_labels = false;
};

Json sample_to_json(const LabeledSample& sample);

// Parses one record. `where` prefixes error messages (e.g. "line 3").
// Unknown top-level fields are moved into `meta` and reported in `unknown`.
LabeledSample sample_from_json(const Json& record, LabelScheme scheme, const ImportOptions& options,
                               std::string_view where, std::vector<std::string>* unknown = nullptr);

Dataset parse_jsonl(std::string_view text, LabelScheme scheme, const ImportOptions& options = {});
Dataset import_jsonl(const std::filesystem::path& path, LabelScheme scheme, const ImportOptions& options = {});

std::string to_jsonl(const Dataset& ds);
void export_jsonl(const Dataset& ds, const std::filesystem::path& path);

// Checks every dataset-level invariant; throws ValidationError naming the
// offending sample. Also recomputes `rubric_kind`.
void validate(Dataset& ds);

RubricKind infer_rubric_kind(const std::vector<LabeledSample>& samples);

// Splits the Train samples into (train, val); samples of other splits stay
// in the first dataset. Val receives round(fraction * n_train) samples.
std::pair<Dataset, Dataset> split_train_val(const Dataset& ds, double fraction, std::uint64_t seed);

// Whitespace-token statistics over response_text.
TokenStats dataset_stats(const Dataset& ds);
std::size_t count_whitespace_tokens(std::string_view text);

// Distinct question ids in first-appearance order.
std::vector<std::string> question_ids(const Dataset& ds);

}  // namespace rubricbench
