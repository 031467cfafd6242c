#pragma once

// Boundary-agnostic scoring against pooled-phrase gold decisions: a system
// link is attributed to the pooled phrase it overlaps and compared with that
// phrase's consensus verdict.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridel/annotation.hpp"
#include "hybridel/gold.hpp"
#include "hybridel/kb.hpp"
#include "hybridel/pipeline.hpp"
#include "hybridel/sampling.hpp"
#include "json.hpp"

namespace hybridel {

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  /// 1 when nothing was predicted.
  double precision() const { return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp); }
  /// 1 when nothing was linkable.
  double recall() const { return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 0.0;
  /// Keyed "person", "organization", "other".
  std::map<std::string, Counts> slices;
  std::size_t scored_phrases = 0;
  std::size_t unscored_phrases = 0;  // no consensus decision
  std::size_t nil_phrases = 0;
  std::size_t do_not_annotate_phrases = 0;
  std::size_t unpooled_links = 0;  // system links overlapping no pooled phrase
  std::optional<std::string> baseline;
  std::optional<double> delta_f1_vs;
};

using KindLookup = std::function<std::optional<EntityKind>(std::string_view uri)>;

/// "person", "organization" (parties included) or "other".
std::string_view slice_name(std::optional<EntityKind> kind);

/// Throws Error when a gold decision names a phrase not in `phrases`.
EvalReport evaluate(std::span<const Annotation> system, std::span<const GoldDecision> gold,
                    std::span<const PooledPhrase> phrases, const KindLookup& kinds = {});

/// (F1_combined - F1_baseline) / F1_baseline; none when the baseline F1 is 0.
std::optional<double> relative_delta_f1(const EvalReport& combined, const EvalReport& baseline);
void attach_baseline(EvalReport& report, const std::string& name, const EvalReport& baseline);

nlohmann::ordered_json to_json(const EvalReport& report);

/// Number of pooled phrases linked by exactly one of the two systems.
std::size_t recall_gain_bound(std::span<const Annotation> a, std::span<const Annotation> b,
                              std::span<const PooledPhrase> phrases);

/// Phrase ids that `annotations` link (non-empty URI), via span overlap.
std::vector<std::string> linked_phrase_ids(std::span<const Annotation> annotations,
                                           std::span<const PooledPhrase> phrases);

/// Candidate entities shown to annotators: the systems' URIs (deduplicated,
/// in member order), then the top `k` KB name-search hits for the surface.
/// URIs missing from the KB come back as kind-other stubs.
std::vector<Entity> preselect_candidates(const PooledPhrase& phrase, const KnowledgeBase& kb, std::size_t k);

/// KB name search ranked by exact alias, alias prefix, token overlap, then URI.
std::vector<const Entity*> search_entities(std::string_view surface, const KnowledgeBase& kb);

struct StratumStats {
  DepartmentLabel department;
  std::size_t scenes = 0;
  std::size_t phrases = 0;
  std::size_t persons = 0;
  std::size_t organizations = 0;

  friend bool operator==(const StratumStats&, const StratumStats&) = default;
};

struct SampleStats {
  std::vector<StratumStats> rows;  // by department name
  StratumStats totals;
};

/// Per stratum: sampled scenes, pooled phrases in them, and consensus links
/// to persons and to organizations (parties included).
SampleStats sample_stats(std::span<const SampleEntry> sample, std::span<const PooledPhrase> phrases,
                         std::span<const GoldDecision> gold, const KindLookup& kinds);

nlohmann::ordered_json to_json(const SampleStats& stats);

}  // namespace hybridel
