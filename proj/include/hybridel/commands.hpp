#pragma once

// Library side of the command-line tool. Each command is a thin shell over
// one library operation; all inputs are paths and all outputs land in `out`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridel/mock_generalist.hpp"

namespace hybridel {

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path kb;
  std::filesystem::path dict;
  std::filesystem::path patterns;
  std::filesystem::path portfolio_map;
  std::vector<std::string> order;
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";
  std::string bind = "127.0.0.1:8080";

  std::size_t limit = 43;
  std::filesystem::path gold;                  // default: <out>/gold.jsonl
  std::optional<std::filesystem::path> mock_rules;
  std::string mock_id = "mock";
  MockDials mock_dials;
  std::map<std::string, std::filesystem::path> external;  // system id -> annotation file
  std::string system = "combined";                         // evaluate: which annotation file
  std::optional<std::string> baseline;                     // evaluate: delta F1 against this system
  std::size_t candidates_k = 3;
};

std::filesystem::path annotation_file(const RunConfig& config, const std::string& system_id);
std::filesystem::path pool_file(const RunConfig& config);
std::filesystem::path sample_file(const RunConfig& config);
std::filesystem::path gold_file(const RunConfig& config);

/// Runs dict, role, the mock (if configured) and external systems; returns
/// linked-annotation counts per system id.
std::map<std::string, std::size_t> cmd_link(const RunConfig& config);
std::size_t cmd_sample(const RunConfig& config);
/// Pools the systems in `order` (or every annotation file when empty), restricted to
/// the sampled scenes when a sample file exists.
std::size_t cmd_pool(const RunConfig& config);
/// Writes annotations.combined.jsonl (preference order) and annotations.vote.jsonl.
std::size_t cmd_combine(const RunConfig& config);
/// Writes eval.<system>.json and returns the report as JSON text.
std::string cmd_evaluate(const RunConfig& config);
std::string cmd_stats(const RunConfig& config);
void cmd_serve(const RunConfig& config);

}  // namespace hybridel
