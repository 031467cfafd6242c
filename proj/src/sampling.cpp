#include "hybridel/sampling.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace hybridel {

using detail::json;

std::vector<std::size_t> largest_remainder(std::span<const std::size_t> weights, std::size_t total) {
  std::vector<std::size_t> seats(weights.size(), 0);
  const auto sum = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  if (sum == 0) return seats;
  std::vector<std::size_t> remainder(weights.size());
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto share = static_cast<unsigned __int128>(weights[i]) * total;
    seats[i] = static_cast<std::size_t>(share / sum);
    remainder[i] = static_cast<std::size_t>(share % sum);
    given += seats[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; given < total; ++k, ++given) ++seats[order[k % order.size()]];
  return seats;
}

DebatesByDepartment group_debates(const Corpus& corpus, const PortfolioMap& map) {
  DebatesByDepartment out;
  for (const auto& debate : corpus)
    for (const auto& label : infer_departments(debate, map)) out[label].push_back(debate.id);
  return out;
}

SamplePlan plan_sample(const DebatesByDepartment& debates, std::size_t overall_limit, std::uint64_t seed) {
  SamplePlan plan;
  plan.overall_limit = overall_limit;
  plan.seed = seed;
  std::vector<std::size_t> weights;
  for (const auto& [_, ids] : debates) weights.push_back(ids.size());
  const auto quotas = largest_remainder(weights, overall_limit);
  std::size_t i = 0;
  for (const auto& [label, _] : debates) plan.strata.push_back({label, quotas[i++]});
  std::stable_sort(plan.strata.begin(), plan.strata.end(), [](const StratumQuota& a, const StratumQuota& b) {
    if (a.quota != b.quota) return a.quota > b.quota;
    return a.department.name < b.department.name;
  });
  return plan;
}

namespace {

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  // Rejection sampling keeps the draw unbiased and identical across standard libraries.
  const std::uint64_t bound = n;
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return static_cast<std::size_t>(r % bound);
  }
}

}  // namespace

std::vector<SampleEntry> draw_sample(const SamplePlan& plan, const Corpus& corpus,
                                     const DebatesByDepartment& debates) {
  for (const auto& s : plan.strata) {
    auto it = debates.find(s.department);
    if (s.quota > 0 && (it == debates.end() || it->second.empty()))
      throw ConfigError("department '" + s.department.name + "' has a quota of " + std::to_string(s.quota) +
                        " but no debates");
  }
  std::mt19937_64 rng(plan.seed);
  std::set<std::string> used;
  std::vector<std::size_t> taken(plan.strata.size(), 0);
  std::vector<SampleEntry> out;

  bool progress = true;
  while (out.size() < plan.overall_limit && progress) {
    progress = false;
    for (std::size_t i = 0; i < plan.strata.size() && out.size() < plan.overall_limit; ++i) {
      const auto& stratum = plan.strata[i];
      if (taken[i] >= stratum.quota) continue;
      std::vector<const std::string*> pool;
      for (const auto& id : debates.at(stratum.department))
        if (!used.contains(id)) pool.push_back(&id);
      if (pool.empty()) continue;
      const std::string& debate_id = *pool[bounded(rng, pool.size())];
      used.insert(debate_id);
      const Debate* debate = find_debate(corpus, debate_id);
      if (!debate) throw Error("draw_sample: unknown debate '" + debate_id + "'");
      const auto& scene = debate->scenes[bounded(rng, debate->scenes.size())];
      out.push_back({stratum.department, debate_id, scene.id});
      ++taken[i];
      progress = true;
    }
  }
  return out;
}

std::vector<SampleEntry> stratified_sample(const Corpus& corpus, const PortfolioMap& map,
                                           std::size_t overall_limit, std::uint64_t seed) {
  if (corpus.empty()) throw PreconditionError("stratified_sample: empty corpus");
  const auto debates = group_debates(corpus, map);
  return draw_sample(plan_sample(debates, overall_limit, seed), corpus, debates);
}

void write_sample(std::ostream& out, std::span<const SampleEntry> sample) {
  out << "[";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    nlohmann::ordered_json j;
    j["department"] = sample[i].department.name;
    j["debate_id"] = sample[i].debate_id;
    j["scene_id"] = sample[i].scene_id;
    out << (i ? ",\n " : "\n ") << j.dump();
  }
  out << (sample.empty() ? "]\n" : "\n]\n");
}

void write_sample(const std::filesystem::path& path, std::span<const SampleEntry> sample) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write sample file '" + path.string() + "'");
  write_sample(out, sample);
}

std::vector<SampleEntry> parse_sample(std::istream& in, const PortfolioMap& map) {
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!j.is_array()) throw ParseError("sample file must be a JSON array", 1, 0);
  std::vector<SampleEntry> out;
  for (const auto& e : j) {
    detail::check_keys(e, {"department", "debate_id", "scene_id"}, "sample entry");
    out.push_back({map.label(detail::require_string(e, "department", "sample entry")),
                   detail::require_string(e, "debate_id", "sample entry"),
                   detail::require_string(e, "scene_id", "sample entry")});
  }
  return out;
}

std::vector<SampleEntry> read_sample(const std::filesystem::path& path, const PortfolioMap& map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open sample file '" + path.string() + "'");
  return parse_sample(in, map);
}

}  // namespace hybridel
