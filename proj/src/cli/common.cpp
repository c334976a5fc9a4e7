#include "common.hpp"

#include <sstream>

#include "rubricbench/digest.hpp"
#include "rubricbench/http_transport.hpp"
#include "rubricbench/replay.hpp"
#include "rubricbench/templates.hpp"

namespace rubricbench::cli {

void add_model_flags(CLI::App* app, ModelFlags& flags, const std::string& prefix) {
  const std::string what = prefix.empty() ? "grading" : prefix.substr(0, prefix.size() - 1);
  app->add_option("--" + prefix + "model", flags.cfg.model_name, what + " model name")->capture_default_str();
  app->add_option("--" + prefix + "base-url", flags.cfg.base_url, what + " API base URL")->capture_default_str();
  app->add_option("--" + prefix + "temperature", flags.cfg.temperature, what + " sampling temperature")
      ->capture_default_str();
  app->add_option("--" + prefix + "max-tokens", flags.cfg.max_tokens, what + " completion token limit")
      ->capture_default_str();
  app->add_option("--" + prefix + "api-key-env", flags.cfg.api_key_env,
                  "environment variable holding the " + what + " API key")
      ->capture_default_str();
}

Json TransportFlags::to_json() const {
  return Json{{"cache_dir", cache_dir.empty() ? Json(nullptr) : Json(cache_dir)},
              {"replay", replay.empty() ? Json(nullptr) : Json(replay)},
              {"record", record.empty() ? Json(nullptr) : Json(record)},
              {"max_in_flight", max_in_flight},
              {"requests_per_minute", requests_per_minute}};
}

void add_transport_flags(CLI::App* app, TransportFlags& flags) {
  app->add_option("--cache-dir", flags.cache_dir, "reuse and store replies under this directory");
  app->add_option("--replay", flags.replay, "serve requests from a recorded fixture (offline)")
      ->check(CLI::ExistingFile);
  app->add_option("--record", flags.record, "append live exchanges to this fixture file");
  app->add_option("--max-in-flight", flags.max_in_flight, "concurrent requests")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app->add_option("--rpm", flags.requests_per_minute, "request rate limit per minute (0 disables)")
      ->capture_default_str();
}

std::unique_ptr<llm::ChatClient> make_client(const TransportFlags& flags) {
  if (!flags.replay.empty() && !flags.record.empty()) throw ValidationError("--replay and --record are exclusive");
  std::shared_ptr<llm::HttpTransport> transport;
  if (!flags.replay.empty()) {
    transport = llm::ReplayTransport::from_file(flags.replay);
  } else {
    transport = std::make_shared<llm::HttplibTransport>();
    if (!flags.record.empty()) transport = std::make_shared<llm::RecordingTransport>(transport, flags.record);
  }
  llm::ClientOptions opts;
  opts.max_in_flight = flags.max_in_flight;
  opts.requests_per_minute = flags.requests_per_minute;
  if (!flags.cache_dir.empty()) opts.cache_dir = fs::path(flags.cache_dir);
  return std::make_unique<llm::ChatClient>(std::move(transport), std::move(opts));
}

void add_scheme_flag(CLI::App* app, LabelScheme& scheme, const std::string& name) {
  app->add_option_function<std::string>(
         name,
         [&scheme](const std::string& v) {
           auto s = parse_scheme(v);
           if (!s) throw CLI::ValidationError("--tier", "expected 2 or 3, got '" + v + "'");
           scheme = *s;
         },
         "label scheme: 2 (two-way) or 3 (three-way)")
      ->default_str("3");
}

Manifest::Manifest(std::string command, fs::path out_dir) : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

void Manifest::add_input(const fs::path& path) { inputs_[path.generic_string()] = git_blob_digest(read_file(path)); }

void Manifest::write_output(const std::string& name, std::string_view content) {
  write_file_atomic(out_dir_ / name, content);
  outputs_[name] = sha256_hex(content);
}

void Manifest::save() const {
  Json templates = Json::object();
  for (const auto& [name, digest] : templates::all_hashes()) templates[name] = digest;
  Json m{{"command", command_},
         {"config", config_},
         {"templates", templates},
         {"inputs", inputs_},
         {"outputs", outputs_},
         {"stats", stats_}};
  write_file_atomic(out_dir_ / "manifest.json", m.dump(2) + "\n");
}

Dataset load_dataset(const fs::path& path, LabelScheme scheme, bool five_way) {
  ImportOptions opts;
  opts.five_way_labels = five_way;
  return import_jsonl(path, scheme, opts);
}

std::string format_stats(const TokenStats& s) {
  std::ostringstream out;
  out << "| questions | responses | mean tokens | median | min | max |\n|---|---|---|---|---|---|\n";
  char mean[32], median[32];
  std::snprintf(mean, sizeof mean, "%.2f", s.mean);
  std::snprintf(median, sizeof median, "%.1f", s.median);
  out << "| " << s.n_questions << " | " << s.n_responses << " | " << mean << " | " << median << " | " << s.min
      << " | " << s.max << " |\n";
  return out.str();
}

namespace {

void append_value(std::vector<std::string>& out, const std::string& flag, const Json& value) {
  if (value.is_boolean()) {
    if (value.get<bool>()) out.push_back(flag);
  } else if (value.is_array()) {
    out.push_back(flag);
    for (const auto& v : value) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  } else if (value.is_string()) {
    out.push_back(flag);
    out.push_back(value.get<std::string>());
  } else if (!value.is_null()) {
    out.push_back(flag);
    out.push_back(value.dump());
  }
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args, const CLI::App& app) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;
  if (!fs::exists(config_path)) throw ValidationError("config file not found: " + config_path);
  const auto config = Json::parse(read_file(config_path), nullptr, false);
  if (config.is_discarded() || !config.is_object()) throw ValidationError("config file is not a JSON object: " + config_path);

  // Locate the subcommand chain.
  const CLI::App* current = &app;
  std::string key;
  std::size_t insert_at = 0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const CLI::App* sub = nullptr;
    try {
      sub = current->get_subcommand(rest[i]);
    } catch (const CLI::OptionNotFound&) {
      continue;
    }
    key += (key.empty() ? "" : " ") + rest[i];
    current = sub;
    insert_at = i + 1;
  }
  if (key.empty()) return rest;
  auto section = config.find(key);
  if (section == config.end()) return rest;
  if (!section->is_object()) throw ValidationError("config section '" + key + "' must be an object");
  std::vector<std::string> injected;
  for (const auto& [flag, value] : section->items()) append_value(injected, "--" + flag, value);
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(), injected.end());
  return rest;
}

}  // namespace rubricbench::cli
