#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hybridel/corpus.hpp"

namespace hybridel {

/// Hamilton apportionment: floor shares, then the leftover seats to the
/// largest remainders (earlier index first on ties). Sums to `total` when
/// any weight is positive.
std::vector<std::size_t> largest_remainder(std::span<const std::size_t> weights, std::size_t total);

struct StratumQuota {
  DepartmentLabel department;
  std::size_t quota = 0;
};

struct SamplePlan {
  std::vector<StratumQuota> strata;  // visit order: descending quota, then name
  std::size_t overall_limit = 0;
  std::uint64_t seed = 0;
};

using DebatesByDepartment = std::map<DepartmentLabel, std::vector<std::string>>;

/// Debate ids per inferred department, in corpus order.
DebatesByDepartment group_debates(const Corpus& corpus, const PortfolioMap& map);

/// Quotas proportional to each department's debate count.
SamplePlan plan_sample(const DebatesByDepartment& debates, std::size_t overall_limit, std::uint64_t seed);

struct SampleEntry {
  DepartmentLabel department;
  std::string debate_id;
  std::string scene_id;

  friend bool operator==(const SampleEntry&, const SampleEntry&) = default;
};

/// Round-robin draw: each department in plan order takes a random unused
/// debate and a random scene from it; full departments skip their turn.
/// A drawn debate leaves the pool for every department.
/// Throws ConfigError for a department with a quota but no debates.
std::vector<SampleEntry> draw_sample(const SamplePlan& plan, const Corpus& corpus,
                                     const DebatesByDepartment& debates);

/// group_debates + plan_sample + draw_sample. Throws PreconditionError on an empty corpus.
std::vector<SampleEntry> stratified_sample(const Corpus& corpus, const PortfolioMap& map,
                                           std::size_t overall_limit, std::uint64_t seed);

// Sample file: a JSON array of {department, debate_id, scene_id}.
void write_sample(std::ostream& out, std::span<const SampleEntry> sample);
void write_sample(const std::filesystem::path& path, std::span<const SampleEntry> sample);
std::vector<SampleEntry> read_sample(const std::filesystem::path& path, const PortfolioMap& map);
std::vector<SampleEntry> parse_sample(std::istream& in, const PortfolioMap& map);

}  // namespace hybridel
