#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rubricbench/dataset.hpp"
#include "rubricbench/llm_client.hpp"

namespace rubricbench::cli {

namespace fs = std::filesystem;

// Set by a subcommand's parse callback; run after parsing succeeds.
using Action = std::function<int()>;

struct ModelFlags {
  llm::ModelConfig cfg;
  Json to_json() const { return cfg.to_json(); }
};

// --<prefix>model, --<prefix>base-url, --<prefix>temperature,
// --<prefix>max-tokens, --<prefix>api-key-env.
void add_model_flags(CLI::App* app, ModelFlags& flags, const std::string& prefix = "");

struct TransportFlags {
  std::string cache_dir;
  std::string replay;
  std::string record;
  int max_in_flight = 8;
  double requests_per_minute = 60.0;

  Json to_json() const;
};

void add_transport_flags(CLI::App* app, TransportFlags& flags);

std::unique_ptr<llm::ChatClient> make_client(const TransportFlags& flags);

// Scheme flag accepting 2|3|2way|3way.
void add_scheme_flag(CLI::App* app, LabelScheme& scheme, const std::string& name = "--tier,--scheme");

// Writes output files and the manifest.json that describes a run.
class Manifest {
 public:
  Manifest(std::string command, fs::path out_dir);

  Json& config() { return config_; }
  Json& stats() { return stats_; }
  void add_input(const fs::path& path);
  // Writes `content` to <out>/<name> atomically and records its SHA-256.
  void write_output(const std::string& name, std::string_view content);
  void save() const;

 private:
  std::string command_;
  fs::path out_dir_;
  Json config_ = Json::object();
  Json stats_ = Json::object();
  Json inputs_ = Json::object();
  Json outputs_ = Json::object();
};

Dataset load_dataset(const fs::path& path, LabelScheme scheme, bool five_way = false);

std::string format_stats(const TokenStats& stats);

// Expands `--config <file>` into the subcommand's arguments. The file holds
// {"<subcommand>": {"<flag>": value, ...}}; nested subcommands use keys like
// "annotate sample". Values are placed before the command-line flags, which
// win because every option keeps its last value.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const CLI::App& app);

}  // namespace rubricbench::cli
