// hybridel: entity linking and benchmark command-line tool.

#include <iostream>

#include "CLI11.hpp"
#include "hybridel/commands.hpp"
#include "hybridel/error.hpp"

namespace {

void add_common(CLI::App* cmd, hybridel::RunConfig& c) {
  cmd->add_option("--corpus", c.corpus, "Corpus file (JSON Lines)");
  cmd->add_option("--kb", c.kb, "Knowledge base file (JSON Lines)");
  cmd->add_option("--dict", c.dict, "Alias dictionary (alias<TAB>uri[<TAB>case=sensitive])");
  cmd->add_option("--patterns", c.patterns, "Address-pattern configuration (JSON)");
  cmd->add_option("--portfolio-map", c.portfolio_map, "Portfolio map (portfolio<TAB>department)");
  cmd->add_option("--order", c.order, "System preference order, e.g. dict,role,mock")->delimiter(',');
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--gold", c.gold, "Gold decision file (default <out>/gold.jsonl)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybridel: specialist + generalist entity linking and benchmark tools"};
  app.require_subcommand(1);
  hybridel::RunConfig config;

  auto* link = app.add_subcommand("link", "Run the linkers over a corpus");
  add_common(link, config);
  std::string mock_rules;
  link->add_option("--mock", mock_rules, "Mock generalist rule table (surface<TAB>uri<TAB>confidence)");
  link->add_option("--mock-id", config.mock_id, "System id for the mock generalist");
  link->add_option("--mock-recall", config.mock_dials.recall, "Mock recall dial in [0,1]")->check(CLI::Range(0.0, 1.0));
  link->add_option("--mock-precision", config.mock_dials.precision, "Mock precision dial in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  std::vector<std::string> external;
  link->add_option("--external", external, "External system annotations as id=path");

  auto* bench = app.add_subcommand("bench", "Benchmark construction and scoring");
  bench->require_subcommand(1);
  auto* sample = bench->add_subcommand("sample", "Draw the stratified scene sample");
  add_common(sample, config);
  sample->add_option("--limit", config.limit, "Overall scene limit");
  auto* pool = bench->add_subcommand("pool", "Pool system annotations into phrases");
  add_common(pool, config);
  auto* combine = bench->add_subcommand("combine", "Combine pooled annotations by preference order");
  add_common(combine, config);
  combine->get_option("--order")->required();
  auto* evaluate = bench->add_subcommand("evaluate", "Score a system against the gold standard");
  add_common(evaluate, config);
  evaluate->add_option("--system", config.system, "System id to score (annotations.<id>.jsonl)");
  std::string baseline;
  evaluate->add_option("--baseline", baseline, "System id for the relative F1 change");
  auto* stats = bench->add_subcommand("stats", "Sample composition statistics");
  add_common(stats, config);

  auto* serve = app.add_subcommand("serve", "Serve the annotation API");
  add_common(serve, config);
  serve->add_option("--bind", config.bind, "host:port");
  serve->add_option("--candidates", config.candidates_k, "KB search results per phrase");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!mock_rules.empty()) config.mock_rules = mock_rules;
    if (!baseline.empty()) config.baseline = baseline;
    for (const auto& spec : external) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw hybridel::ConfigError("--external expects id=path, got '" + spec + "'");
      config.external[spec.substr(0, eq)] = spec.substr(eq + 1);
    }

    if (link->parsed()) {
      for (const auto& [id, n] : hybridel::cmd_link(config)) std::cout << id << "\t" << n << "\n";
    } else if (sample->parsed()) {
      std::cout << hybridel::cmd_sample(config) << " scenes sampled\n";
    } else if (pool->parsed()) {
      std::cout << hybridel::cmd_pool(config) << " pooled phrases\n";
    } else if (combine->parsed()) {
      std::cout << hybridel::cmd_combine(config) << " combined annotations\n";
    } else if (evaluate->parsed()) {
      std::cout << hybridel::cmd_evaluate(config);
    } else if (stats->parsed()) {
      std::cout << hybridel::cmd_stats(config);
    } else if (serve->parsed()) {
      std::cerr << "serving on " << config.bind << "\n";
      hybridel::cmd_serve(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
