#include "hybridel/evaluation.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "hybridel/unicode.hpp"
#include "hybridel/uri.hpp"

namespace hybridel {

std::string_view slice_name(std::optional<EntityKind> kind) {
  if (!kind) return "other";
  switch (*kind) {
    case EntityKind::person: return "person";
    case EntityKind::party:
    case EntityKind::organization: return "organization";
    case EntityKind::other: return "other";
  }
  return "other";
}

namespace {

/// Maps annotations to the pooled phrase they overlap.
class PhraseLocator {
 public:
  explicit PhraseLocator(std::span<const PooledPhrase> phrases) : phrases_(phrases) {
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      by_scene_[phrases[i].debate_id + '\x1f' + phrases[i].scene_id].push_back(i);
      by_id_.emplace(phrases[i].phrase_id, i);
    }
  }

  std::optional<std::size_t> locate(const Annotation& a) const {
    auto it = by_scene_.find(a.debate_id + '\x1f' + a.scene_id);
    if (it == by_scene_.end()) return std::nullopt;
    for (auto i : it->second)
      if (phrases_[i].contains(a)) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> find(const std::string& phrase_id) const {
    auto it = by_id_.find(phrase_id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::span<const PooledPhrase> phrases_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_scene_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

std::optional<EntityKind> kind(const KindLookup& kinds, std::string_view uri) {
  return kinds ? kinds(uri) : std::nullopt;
}

}  // namespace

EvalReport evaluate(std::span<const Annotation> system, std::span<const GoldDecision> gold,
                    std::span<const PooledPhrase> phrases, const KindLookup& kinds) {
  const PhraseLocator locator(phrases);
  for (const auto& d : gold)
    if (!locator.find(d.phrase_id)) throw Error("evaluate: gold decision for unknown phrase '" + d.phrase_id + "'");
  const auto consensus = consensus_gold(gold);

  // normalized uri -> first original spelling, per phrase
  std::vector<std::map<std::string, std::string>> links(phrases.size());
  EvalReport report;
  for (const auto& a : system) {
    if (!a.linked()) continue;
    if (auto i = locator.locate(a))
      links[*i].emplace(normalize_uri(a.uri), a.uri);
    else
      ++report.unpooled_links;
  }

  Counts total;
  for (const char* name : {"person", "organization", "other"}) report.slices[name] = {};
  auto slice = [&](std::string_view uri) -> Counts& {
    return report.slices[std::string(slice_name(kind(kinds, uri)))];
  };

  for (std::size_t i = 0; i < phrases.size(); ++i) {
    auto g = consensus.find(phrases[i].phrase_id);
    if (g == consensus.end()) {
      ++report.unscored_phrases;
      continue;
    }
    ++report.scored_phrases;
    const auto& decision = g->second;
    const auto& predicted = links[i];
    if (decision.verdict != Verdict::link) {
      ++(decision.verdict == Verdict::nil_not_in_kb ? report.nil_phrases : report.do_not_annotate_phrases);
      for (const auto& [_, original] : predicted) {
        ++total.fp;
        ++slice(original).fp;
      }
      continue;
    }
    std::set<std::string> accepted;
    for (const auto& u : decision.uris) accepted.insert(normalize_uri(u));
    auto hit = std::find_if(predicted.begin(), predicted.end(),
                            [&](const auto& p) { return accepted.contains(p.first); });
    if (hit != predicted.end()) {
      ++total.tp;
      ++slice(hit->second).tp;
      continue;
    }
    for (const auto& [_, original] : predicted) {
      ++total.fp;
      ++slice(original).fp;
    }
    ++total.fn;
    ++slice(decision.uris.front()).fn;
  }

  report.tp = total.tp;
  report.fp = total.fp;
  report.fn = total.fn;
  report.precision = total.precision();
  report.recall = total.recall();
  report.f1 = total.f1();
  return report;
}

std::optional<double> relative_delta_f1(const EvalReport& combined, const EvalReport& baseline) {
  if (baseline.f1 == 0.0) return std::nullopt;
  return (combined.f1 - baseline.f1) / baseline.f1;
}

void attach_baseline(EvalReport& report, const std::string& name, const EvalReport& baseline) {
  report.baseline = name;
  report.delta_f1_vs = relative_delta_f1(report, baseline);
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["slices"] = nlohmann::ordered_json::object();
  for (const auto& [name, c] : r.slices)
    j["slices"][name] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"precision", c.precision()},
                         {"recall", c.recall()}, {"f1", c.f1()}};
  j["scored_phrases"] = r.scored_phrases;
  j["unscored_phrases"] = r.unscored_phrases;
  j["nil_phrases"] = r.nil_phrases;
  j["do_not_annotate_phrases"] = r.do_not_annotate_phrases;
  j["unpooled_links"] = r.unpooled_links;
  j["baseline"] = r.baseline ? nlohmann::ordered_json(*r.baseline) : nlohmann::ordered_json(nullptr);
  j["delta_f1_vs"] = r.delta_f1_vs ? nlohmann::ordered_json(*r.delta_f1_vs) : nlohmann::ordered_json(nullptr);
  return j;
}

std::vector<std::string> linked_phrase_ids(std::span<const Annotation> annotations,
                                           std::span<const PooledPhrase> phrases) {
  const PhraseLocator locator(phrases);
  std::set<std::string> ids;
  for (const auto& a : annotations)
    if (a.linked())
      if (auto i = locator.locate(a)) ids.insert(phrases[*i].phrase_id);
  return {ids.begin(), ids.end()};
}

std::size_t recall_gain_bound(std::span<const Annotation> a, std::span<const Annotation> b,
                              std::span<const PooledPhrase> phrases) {
  const auto la = linked_phrase_ids(a, phrases);
  const auto lb = linked_phrase_ids(b, phrases);
  std::vector<std::string> diff;
  std::set_symmetric_difference(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(diff));
  return diff.size();
}

// -- candidates --------------------------------------------------------------

namespace {

std::set<std::u32string> tokens(const std::u32string& folded) {
  std::set<std::u32string> out;
  std::u32string cur;
  for (char32_t c : folded) {
    if (unicode::is_alnum(c)) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.insert(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.insert(std::move(cur));
  return out;
}

}  // namespace

std::vector<const Entity*> search_entities(std::string_view surface, const KnowledgeBase& kb) {
  const auto query = unicode::fold(unicode::decode(surface));
  const auto query_tokens = tokens(query);
  struct Hit {
    int rank;
    std::size_t overlap;
    const Entity* entity;
  };
  std::vector<Hit> hits;
  for (const auto& e : kb.entities()) {
    std::optional<Hit> best;
    for (const auto& alias : e.aliases) {
      const auto folded = unicode::fold(unicode::decode(alias));
      Hit h{3, 0, &e};
      if (folded == query) {
        h.rank = 0;
      } else if (!query.empty() && folded.starts_with(query)) {
        h.rank = 1;
      } else {
        for (const auto& t : tokens(folded)) h.overlap += query_tokens.contains(t) ? 1 : 0;
        if (h.overlap == 0) continue;
        h.rank = 2;
      }
      if (!best || h.rank < best->rank || (h.rank == best->rank && h.overlap > best->overlap)) best = h;
    }
    if (best) hits.push_back(*best);
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return a.entity->uri < b.entity->uri;
  });
  std::vector<const Entity*> out;
  for (const auto& h : hits) out.push_back(h.entity);
  return out;
}

std::vector<Entity> preselect_candidates(const PooledPhrase& phrase, const KnowledgeBase& kb, std::size_t k) {
  std::vector<Entity> out;
  std::set<std::string> seen;
  auto add = [&](const std::string& uri) {
    if (!seen.insert(uri).second) return;
    if (const auto* e = kb.find(uri)) {
      out.push_back(*e);
    } else {
      out.push_back(Entity{uri, EntityKind::other, uri, {uri}, std::nullopt});
    }
  };
  for (const auto& a : phrase.members)
    if (a.linked()) add(a.uri);
  const auto hits = search_entities(phrase.surface, kb);
  for (std::size_t i = 0; i < hits.size() && i < k; ++i) add(hits[i]->uri);
  return out;
}

// -- sample statistics -------------------------------------------------------

SampleStats sample_stats(std::span<const SampleEntry> sample, std::span<const PooledPhrase> phrases,
                         std::span<const GoldDecision> gold, const KindLookup& kinds) {
  std::map<std::string, StratumStats> rows;
  std::map<std::pair<std::string, std::string>, std::string> stratum_of_scene;
  for (const auto& e : sample) {
    auto& row = rows[e.department.name];
    row.department = e.department;
    ++row.scenes;
    stratum_of_scene[{e.debate_id, e.scene_id}] = e.department.name;
  }
  const auto consensus = consensus_gold(gold);
  for (const auto& p : phrases) {
    auto s = stratum_of_scene.find({p.debate_id, p.scene_id});
    if (s == stratum_of_scene.end()) continue;
    auto& row = rows[s->second];
    ++row.phrases;
    auto g = consensus.find(p.phrase_id);
    if (g == consensus.end() || g->second.verdict != Verdict::link) continue;
    std::optional<EntityKind> k;
    for (const auto& u : g->second.uris)
      if ((k = kind(kinds, u))) break;
    const auto name = slice_name(k);
    if (name == "person") ++row.persons;
    if (name == "organization") ++row.organizations;
  }
  SampleStats stats;
  stats.totals.department = {"Total", false};
  for (auto& [_, row] : rows) {
    stats.totals.scenes += row.scenes;
    stats.totals.phrases += row.phrases;
    stats.totals.persons += row.persons;
    stats.totals.organizations += row.organizations;
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

nlohmann::ordered_json to_json(const SampleStats& stats) {
  auto row_json = [](const StratumStats& r) {
    nlohmann::ordered_json j;
    j["department"] = r.department.name;
    j["scenes"] = r.scenes;
    j["phrases"] = r.phrases;
    j["persons"] = r.persons;
    j["organizations"] = r.organizations;
    return j;
  };
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : stats.rows) j["rows"].push_back(row_json(r));
  j["totals"] = row_json(stats.totals);
  return j;
}

}  // namespace hybridel
