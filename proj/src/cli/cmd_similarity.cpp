#include <iostream>

#include "commands.hpp"
#include "rubricbench/similarity.hpp"

namespace rubricbench::cli {

namespace {

struct SimilarityArgs {
  std::string input;
  LabelScheme scheme = LabelScheme::ThreeWay;
  std::string out;
  ModelFlags embed{[] {
    llm::ModelConfig c;
    c.model_name = "text-embedding-3-small";
    return c;
  }()};
  TransportFlags transport;
};

int run_similarity(const SimilarityArgs& a) {
  const auto ds = load_dataset(a.input, a.scheme);
  auto client = make_client(a.transport);
  const auto report = rubric_similarity_report(*client, ds, a.embed.cfg);
  const auto md = report.to_markdown();
  std::cout << md;
  if (!a.out.empty()) {
    Manifest m("similarity", a.out);
    m.config() = {{"input", a.input},
                  {"scheme", to_string(a.scheme)},
                  {"embedding", {{"model", a.embed.cfg.model_name}, {"base_url", a.embed.cfg.base_url}, {"api_key_env", a.embed.cfg.api_key_env}}},
                  {"transport", a.transport.to_json()}};
    m.add_input(a.input);
    m.write_output("similarity.json", report.to_json().dump(2) + "\n");
    m.write_output("report.md", md);
    m.save();
  }
  return 0;
}

}  // namespace

void add_similarity(CLI::App& app, Action& action) {
  auto a = std::make_shared<SimilarityArgs>();
  auto* sub = app.add_subcommand("similarity", "cosine similarity of rubrics to solutions and answers");
  sub->add_option("input", a->input, "dataset JSONL with question rubrics")->required()->check(CLI::ExistingFile);
  add_scheme_flag(sub, a->scheme);
  sub->add_option("--embed-model", a->embed.cfg.model_name, "embedding model")->capture_default_str();
  sub->add_option("--base-url", a->embed.cfg.base_url, "API base URL")->capture_default_str();
  sub->add_option("--api-key-env", a->embed.cfg.api_key_env, "environment variable holding the API key")
      ->capture_default_str();
  sub->add_option("--out", a->out, "write similarity.json, report.md and manifest.json here");
  add_transport_flags(sub, a->transport);
  sub->callback([a, &action] { action = [a] { return run_similarity(*a); }; });
}

}  // namespace rubricbench::cli
