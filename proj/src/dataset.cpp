#include "rubricbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rubricbench/digest.hpp"
#include "rubricbench/error.hpp"
#include "rubricbench/log.hpp"
#include "rubricbench/random.hpp"

namespace rubricbench {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "val") return Split::Val;
  if (text == "test") return Split::Test;
  return std::nullopt;
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Human: return "human";
    case Provenance::LlmLabeled: return "llm_labeled";
    case Provenance::LlmGenerated: return "llm_generated";
  }
  return "human";
}

std::optional<Provenance> parse_provenance(std::string_view text) {
  if (text == "human") return Provenance::Human;
  if (text == "llm_labeled") return Provenance::LlmLabeled;
  if (text == "llm_generated") return Provenance::LlmGenerated;
  return std::nullopt;
}

std::string_view to_string(RubricKind kind) {
  switch (kind) {
    case RubricKind::None: return "none";
    case RubricKind::LabelLevel: return "label_level";
    case RubricKind::QuestionSpecific: return "question_specific";
  }
  return "none";
}

Json sample_to_json(const LabeledSample& s) {
  Json j;
  j["id"] = s.id;
  j["dataset"] = s.dataset;
  j["question_id"] = s.question_id;
  j["question_text"] = s.question_text;
  j["model_solution"] = s.model_solution;
  j["rubric_text"] = s.rubric_text ? Json(*s.rubric_text) : Json(nullptr);
  j["response_text"] = s.response_text;
  j["label"] = std::string(to_string(s.label));
  j["split"] = std::string(to_string(s.split));
  j["provenance"] = std::string(to_string(s.provenance));
  if (!s.meta.empty()) j["meta"] = s.meta;
  return j;
}

namespace {

const std::set<std::string, std::less<>> kKnownFields = {
    "id",    "dataset", "question_id", "question_text", "model_solution", "rubric_text", "response_text",
    "label", "split",   "provenance",  "meta",
};

std::string required_string(const Json& record, const char* field, std::string_view where) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) {
    throw ValidationError(std::string(where) + ": missing required field '" + field + "'");
  }
  if (!it->is_string()) {
    throw ValidationError(std::string(where) + ": field '" + field + "' must be a string");
  }
  return it->get<std::string>();
}

void check_provenance_metadata(const LabeledSample& s, std::string_view where) {
  const char* key = nullptr;
  if (s.provenance == Provenance::LlmLabeled) key = kLabelerModelKey;
  if (s.provenance == Provenance::LlmGenerated) key = kGeneratorModelKey;
  if (key == nullptr) return;
  auto it = s.meta.find(key);
  if (it == s.meta.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw ValidationError(std::string(where) + ": provenance " + std::string(to_string(s.provenance)) +
                          " requires meta." + key);
  }
}

}  // namespace

LabeledSample sample_from_json(const Json& record, LabelScheme scheme, const ImportOptions& options,
                               std::string_view where, std::vector<std::string>* unknown) {
  if (!record.is_object()) throw ValidationError(std::string(where) + ": expected a JSON object");

  LabeledSample s;
  s.id = required_string(record, "id", where);
  if (s.id.empty()) throw ValidationError(std::string(where) + ": id must be non-empty");
  s.dataset = required_string(record, "dataset", where);
  s.question_id = required_string(record, "question_id", where);
  if (s.question_id.empty()) throw ValidationError(std::string(where) + ": question_id must be non-empty");
  s.question_text = required_string(record, "question_text", where);
  s.model_solution = required_string(record, "model_solution", where);
  s.response_text = required_string(record, "response_text", where);

  if (auto it = record.find("rubric_text"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(std::string(where) + ": field 'rubric_text' must be a string or null");
    s.rubric_text = it->get<std::string>();
  }

  const std::string label_text = required_string(record, "label", where);
  if (options.five_way_labels) {
    auto five = parse_five_way_label(label_text);
    if (!five) throw ValidationError(std::string(where) + ": unknown five-way label '" + label_text + "'");
    s.label = collapse_label(*five, scheme);
  } else {
    auto label = parse_label(label_text);
    if (!label) throw ValidationError(std::string(where) + ": unknown label '" + label_text + "'");
    if (!is_legal(*label, scheme)) {
      throw ValidationError(std::string(where) + ": label '" + label_text + "' is outside the " +
                            std::string(to_string(scheme)) + " scheme");
    }
    s.label = *label;
  }

  const std::string split_text = required_string(record, "split", where);
  auto split = parse_split(split_text);
  if (!split) throw ValidationError(std::string(where) + ": unknown split '" + split_text + "'");
  s.split = *split;

  const std::string prov_text = required_string(record, "provenance", where);
  auto prov = parse_provenance(prov_text);
  if (!prov) throw ValidationError(std::string(where) + ": unknown provenance '" + prov_text + "'");
  s.provenance = *prov;

  if (auto it = record.find("meta"); it != record.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError(std::string(where) + ": field 'meta' must be an object");
    s.meta = *it;
  }
  for (const auto& [key, value] : record.items()) {
    if (kKnownFields.contains(key)) continue;
    if (unknown) unknown->push_back(key);
    if (!s.meta.contains(key)) s.meta[key] = value;
  }
  check_provenance_metadata(s, where);
  return s;
}

Dataset parse_jsonl(std::string_view text, LabelScheme scheme, const ImportOptions& options) {
  Dataset ds;
  ds.scheme = scheme;
  std::unordered_map<std::string, std::size_t> id_lines;
  std::set<std::string> unknown_fields;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError(where + ": malformed JSON (" + e.what() + ")");
    }
    std::vector<std::string> unknown;
    LabeledSample sample = sample_from_json(record, scheme, options, where, &unknown);
    unknown_fields.insert(unknown.begin(), unknown.end());
    auto [it, inserted] = id_lines.emplace(sample.id, line_no);
    if (!inserted) {
      throw ValidationError(where + ": duplicate id '" + sample.id + "' (first seen on line " +
                            std::to_string(it->second) + ")");
    }
    ds.samples.push_back(std::move(sample));
    if (end == text.size()) break;
  }

  for (const auto& field : unknown_fields) {
    warn("unknown field '" + field + "' preserved under meta");
  }
  if (!ds.samples.empty()) ds.name = ds.samples.front().dataset;
  validate(ds);
  return ds;
}

Dataset import_jsonl(const std::filesystem::path& path, LabelScheme scheme, const ImportOptions& options) {
  if (!std::filesystem::exists(path)) throw ValidationError("file not found: " + path.string());
  return parse_jsonl(read_file(path), scheme, options);
}

std::string to_jsonl(const Dataset& ds) {
  std::string out;
  for (const auto& s : ds.samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

void export_jsonl(const Dataset& ds, const std::filesystem::path& path) { write_file_atomic(path, to_jsonl(ds)); }

RubricKind infer_rubric_kind(const std::vector<LabeledSample>& samples) {
  if (samples.empty()) return RubricKind::None;
  std::set<std::string_view> rubrics;
  std::set<std::string_view> questions;
  for (const auto& s : samples) {
    if (!s.rubric_text) return RubricKind::None;
    rubrics.insert(*s.rubric_text);
    questions.insert(s.question_id);
  }
  if (questions.size() > 1 && rubrics.size() == 1) return RubricKind::LabelLevel;
  return RubricKind::QuestionSpecific;
}

void validate(Dataset& ds) {
  std::unordered_set<std::string_view> ids;
  std::unordered_map<std::string_view, std::string_view> rubric_by_question;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    const std::string where = "sample " + std::to_string(i + 1) + " (id '" + s.id + "')";
    if (!ids.insert(s.id).second) throw ValidationError(where + ": duplicate id");
    if (s.question_id.empty()) throw ValidationError(where + ": question_id must be non-empty");
    if (!is_legal(s.label, ds.scheme)) {
      throw ValidationError(where + ": label '" + std::string(to_string(s.label)) + "' is outside the " +
                            std::string(to_string(ds.scheme)) + " scheme");
    }
    check_provenance_metadata(s, where);
    if (s.rubric_text) {
      auto [it, inserted] = rubric_by_question.emplace(s.question_id, *s.rubric_text);
      if (!inserted && it->second != *s.rubric_text) {
        throw ValidationError(where + ": rubric_text differs from earlier samples of question '" + s.question_id + "'");
      }
    }
  }
  ds.rubric_kind = infer_rubric_kind(ds.samples);
}

std::pair<Dataset, Dataset> split_train_val(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("split fraction must lie in (0, 1)");
  std::vector<std::size_t> train_idx;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (ds.samples[i].split == Split::Train) train_idx.push_back(i);
  }
  if (train_idx.size() < 2) throw ValidationError("split needs at least 2 train samples");
  const auto n = train_idx.size();
  const auto n_val = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n_val == 0 || n_val == n) {
    throw ValidationError("fraction " + std::to_string(fraction) + " of " + std::to_string(n) +
                          " train samples leaves an empty partition");
  }

  Rng rng(seed);
  std::vector<bool> to_val(ds.samples.size(), false);
  for (std::size_t pick : rng.sample_indices(n, n_val)) to_val[train_idx[pick]] = true;

  Dataset rest{ds.name, ds.scheme, {}, ds.rubric_kind};
  Dataset val{ds.name, ds.scheme, {}, ds.rubric_kind};
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (to_val[i]) {
      LabeledSample s = ds.samples[i];
      s.split = Split::Val;
      val.samples.push_back(std::move(s));
    } else {
      rest.samples.push_back(ds.samples[i]);
    }
  }
  return {std::move(rest), std::move(val)};
}

std::size_t count_whitespace_tokens(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  for (std::string tok; in >> tok;) ++n;
  return n;
}

TokenStats dataset_stats(const Dataset& ds) {
  if (ds.samples.empty()) throw ValidationError("dataset is empty");
  std::vector<std::int64_t> counts;
  counts.reserve(ds.samples.size());
  std::unordered_set<std::string_view> questions;
  for (const auto& s : ds.samples) {
    counts.push_back(static_cast<std::int64_t>(count_whitespace_tokens(s.response_text)));
    questions.insert(s.question_id);
  }
  std::sort(counts.begin(), counts.end());
  TokenStats st;
  const auto n = counts.size();
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  st.mean = sum / static_cast<double>(n);
  st.median = n % 2 == 1 ? static_cast<double>(counts[n / 2])
                         : (static_cast<double>(counts[n / 2 - 1]) + static_cast<double>(counts[n / 2])) / 2.0;
  st.min = counts.front();
  st.max = counts.back();
  st.n_questions = static_cast<std::int64_t>(questions.size());
  st.n_responses = static_cast<std::int64_t>(n);
  return st;
}

std::vector<std::string> question_ids(const Dataset& ds) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& s : ds.samples) {
    if (seen.insert(s.question_id).second) out.push_back(s.question_id);
  }
  return out;
}

}  // namespace rubricbench
