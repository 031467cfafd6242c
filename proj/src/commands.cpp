#include "hybridel/commands.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "hybridel/corpus.hpp"
#include "hybridel/evaluation.hpp"
#include "hybridel/pipeline.hpp"
#include "hybridel/sampling.hpp"
#include "hybridel/service.hpp"

namespace hybridel {

namespace fs = std::filesystem;

namespace {

void require_file(const fs::path& path, const char* flag) {
  if (path.empty()) throw ConfigError(std::string("missing required ") + flag);
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + " file not found: " + path.string());
}

void ensure_out(const RunConfig& config) { fs::create_directories(config.out); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

constexpr std::string_view kPrefix = "annotations.";
constexpr std::string_view kSuffix = ".jsonl";

/// System ids with an annotation file in the output directory, sorted.
std::vector<std::string> discovered_systems(const RunConfig& config) {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(config.out)) {
    const auto name = entry.path().filename().string();
    if (!name.starts_with(kPrefix) || !name.ends_with(kSuffix)) continue;
    auto id = name.substr(kPrefix.size(), name.size() - kPrefix.size() - kSuffix.size());
    if (id != "combined" && id != kVoteSystemId) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

KindLookup kind_lookup(const KnowledgeBase* kb) {
  if (!kb) return {};
  return [kb](std::string_view uri) { return kb->kind_of(uri); };
}

}  // namespace

fs::path annotation_file(const RunConfig& config, const std::string& system_id) {
  return config.out / (std::string(kPrefix) + system_id + std::string(kSuffix));
}
fs::path pool_file(const RunConfig& config) { return config.out / "pool.jsonl"; }
fs::path sample_file(const RunConfig& config) { return config.out / "sample.json"; }
fs::path gold_file(const RunConfig& config) { return config.gold.empty() ? config.out / "gold.jsonl" : config.gold; }

std::map<std::string, std::size_t> cmd_link(const RunConfig& config) {
  require_file(config.corpus, "--corpus");
  require_file(config.kb, "--kb");
  require_file(config.dict, "--dict");
  require_file(config.patterns, "--patterns");
  if (config.mock_rules) require_file(*config.mock_rules, "--mock");
  for (const auto& [_, path] : config.external) require_file(path, "--external");
  ensure_out(config);

  const auto corpus = load_corpus(config.corpus);
  const auto kb = load_kb(config.kb);
  std::vector<std::unique_ptr<LinkerSystem>> systems;
  systems.push_back(std::make_unique<DictionarySystem>(load_dictionary(config.dict)));
  systems.push_back(std::make_unique<RoleSystem>(*kb, load_pattern_config(config.patterns)));
  if (config.mock_rules)
    systems.push_back(
        std::make_unique<MockGeneralist>(config.mock_id, load_mock_rules(*config.mock_rules), config.mock_dials));
  for (const auto& [id, path] : config.external)
    systems.push_back(std::make_unique<FileSystem>(id, read_annotations(path)));

  std::map<std::string, std::size_t> counts;
  for (const auto& system : systems) {
    if (counts.contains(system->id())) throw ConfigError("duplicate system id '" + system->id() + "'");
    const auto annotations = run_system(*system, corpus);
    write_annotations(annotation_file(config, system->id()), annotations);
    counts[system->id()] = static_cast<std::size_t>(
        std::count_if(annotations.begin(), annotations.end(), [](const Annotation& a) { return a.linked(); }));
  }
  return counts;
}

std::size_t cmd_sample(const RunConfig& config) {
  require_file(config.corpus, "--corpus");
  require_file(config.portfolio_map, "--portfolio-map");
  ensure_out(config);
  const auto sample =
      stratified_sample(load_corpus(config.corpus), load_portfolio_map(config.portfolio_map), config.limit, config.seed);
  write_sample(sample_file(config), sample);
  return sample.size();
}

std::size_t cmd_pool(const RunConfig& config) {
  require_file(config.corpus, "--corpus");
  ensure_out(config);
  const auto corpus = load_corpus(config.corpus);
  const auto ids = config.order.empty() ? discovered_systems(config) : config.order;
  std::vector<Annotation> all;
  for (const auto& id : ids) {
    require_file(annotation_file(config, id), "annotation");
    auto part = read_annotations(annotation_file(config, id));
    all.insert(all.end(), part.begin(), part.end());
  }
  std::vector<std::pair<std::string, std::string>> scenes;
  if (fs::exists(sample_file(config))) {
    const PortfolioMap labels;  // department labels are carried through by name only
    for (const auto& e : read_sample(sample_file(config), labels)) scenes.emplace_back(e.debate_id, e.scene_id);
  }
  const auto phrases = pool_corpus(all, corpus, scenes);
  write_pool(pool_file(config), phrases);
  return phrases.size();
}

std::size_t cmd_combine(const RunConfig& config) {
  require_file(pool_file(config), "pool");
  const auto phrases = read_pool(pool_file(config));
  const auto discovered = discovered_systems(config);
  std::set<std::string> registered(discovered.begin(), discovered.end());
  for (const auto& p : phrases)
    for (const auto& a : p.members) registered.insert(a.system_id);
  const auto combined = combine_preference(config.order, phrases, registered);
  write_annotations(annotation_file(config, "combined"), combined);
  write_annotations(annotation_file(config, std::string(kVoteSystemId)), combine_voting(phrases));
  return combined.size();
}

std::string cmd_evaluate(const RunConfig& config) {
  require_file(pool_file(config), "pool");
  require_file(gold_file(config), "--gold");
  require_file(annotation_file(config, config.system), "system annotation");
  std::unique_ptr<KnowledgeBase> kb;
  if (!config.kb.empty()) {
    require_file(config.kb, "--kb");
    kb = load_kb(config.kb);
  }
  const auto phrases = read_pool(pool_file(config));
  const auto gold = read_gold(gold_file(config));
  const auto kinds = kind_lookup(kb.get());
  auto report = evaluate(read_annotations(annotation_file(config, config.system)), gold, phrases, kinds);
  if (config.baseline) {
    require_file(annotation_file(config, *config.baseline), "baseline annotation");
    const auto base = evaluate(read_annotations(annotation_file(config, *config.baseline)), gold, phrases, kinds);
    attach_baseline(report, *config.baseline, base);
  }
  const auto text = to_json(report).dump(2) + "\n";
  write_text(config.out / ("eval." + config.system + ".json"), text);
  return text;
}

std::string cmd_stats(const RunConfig& config) {
  require_file(sample_file(config), "sample");
  require_file(pool_file(config), "pool");
  require_file(gold_file(config), "--gold");
  require_file(config.kb, "--kb");
  const PortfolioMap labels = config.portfolio_map.empty() ? PortfolioMap{} : load_portfolio_map(config.portfolio_map);
  const auto kb = load_kb(config.kb);
  const auto stats = sample_stats(read_sample(sample_file(config), labels), read_pool(pool_file(config)),
                                  read_gold(gold_file(config)), kind_lookup(kb.get()));
  const auto text = to_json(stats).dump(2) + "\n";
  write_text(config.out / "stats.json", text);
  return text;
}

void cmd_serve(const RunConfig& config) {
  require_file(config.corpus, "--corpus");
  require_file(config.kb, "--kb");
  require_file(pool_file(config), "pool");
  const auto corpus = load_corpus(config.corpus);
  const auto kb = load_kb(config.kb);
  std::vector<SampleEntry> sample;
  if (fs::exists(sample_file(config))) sample = read_sample(sample_file(config), PortfolioMap{});
  GoldStore store(gold_file(config));
  AnnotationService service(corpus, std::move(sample), read_pool(pool_file(config)), *kb, store, config.candidates_k);
  serve(service, config.bind);
}

}  // namespace hybridel
