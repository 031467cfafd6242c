#include "hybridel/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hybridel/dict_linker.hpp"
#include "json_util.hpp"

namespace hybridel {

using detail::json;

DictionarySystem::DictionarySystem(AliasDictionary dict, std::string id)
    : id_(std::move(id)), dict_(std::move(dict)), automaton_(Automaton::build(dict_)) {}

std::vector<Annotation> DictionarySystem::annotate(const Debate& debate, const Scene& scene) const {
  auto out = link_dictionary(automaton_, dict_, debate, scene);
  for (auto& a : out) a.system_id = id_;
  return out;
}

RoleSystem::RoleSystem(const KnowledgeBase& kb, PatternConfig config, std::string id)
    : id_(std::move(id)), kb_(kb), config_(std::move(config)) {}

std::vector<Annotation> RoleSystem::annotate(const Debate& debate, const Scene& scene) const {
  // Speakers list per call keeps the system stateless across threads.
  auto result = link_roles(debate, scene, speakers_list(debate), kb_, config_);
  auto out = std::move(result.links);
  out.insert(out.end(), result.candidates.begin(), result.candidates.end());
  for (auto& a : out) a.system_id = id_;
  std::sort(out.begin(), out.end(), annotation_less);
  return out;
}

FileSystem::FileSystem(std::string id, std::vector<Annotation> annotations)
    : id_(std::move(id)), annotations_(std::move(annotations)) {
  for (auto& a : annotations_) a.system_id = id_;
  std::sort(annotations_.begin(), annotations_.end(), annotation_less);
}

std::vector<Annotation> FileSystem::annotate(const Debate& debate, const Scene& scene) const {
  std::vector<Annotation> out;
  for (const auto& a : annotations_)
    if (a.debate_id == debate.id && a.scene_id == scene.id) out.push_back(a);
  return out;
}

std::vector<Annotation> run_system(const LinkerSystem& system, const Corpus& corpus) {
  std::vector<Annotation> out;
  for (const auto& debate : corpus)
    for (const auto& scene : debate.scenes) {
      auto part = system.annotate(debate, scene);
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  return out;
}

// -- pooling -----------------------------------------------------------------

std::string make_phrase_id(std::string_view debate_id, std::string_view scene_id, std::size_t ordinal) {
  return std::string(debate_id) + "/" + std::string(scene_id) + "#" + std::to_string(ordinal);
}

std::vector<PooledPhrase> pool(std::span<const Annotation> annotations, const Debate& debate,
                               const Scene& scene) {
  const auto text = scene_text(scene);
  std::vector<Annotation> sorted(annotations.begin(), annotations.end());
  for (const auto& a : sorted) {
    if (a.debate_id != debate.id || a.scene_id != scene.id)
      throw Error("pool: annotation for " + a.debate_id + "/" + a.scene_id + " given for scene " +
                  debate.id + "/" + scene.id);
    if (a.start >= a.end || a.end > text.text.size())
      throw Error("pool: span [" + std::to_string(a.start) + "," + std::to_string(a.end) +
                  ") outside scene " + debate.id + "/" + scene.id);
  }
  std::sort(sorted.begin(), sorted.end(), annotation_less);

  std::vector<PooledPhrase> out;
  for (auto& a : sorted) {
    if (out.empty() || a.start >= out.back().end) {
      PooledPhrase p;
      p.debate_id = debate.id;
      p.scene_id = scene.id;
      p.start = a.start;
      p.end = a.end;
      out.push_back(std::move(p));
    }
    auto& p = out.back();
    p.end = std::max(p.end, a.end);
    p.members.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].phrase_id = make_phrase_id(debate.id, scene.id, i);
    out[i].surface = text.slice(out[i].start, out[i].end);
  }
  return out;
}

std::vector<PooledPhrase> pool_corpus(std::span<const Annotation> annotations, const Corpus& corpus,
                                      std::span<const std::pair<std::string, std::string>> scenes) {
  std::map<std::pair<std::string, std::string>, std::vector<Annotation>> by_scene;
  for (const auto& a : annotations) by_scene[{a.debate_id, a.scene_id}].push_back(a);

  std::set<std::pair<std::string, std::string>> wanted(scenes.begin(), scenes.end());
  std::vector<PooledPhrase> out;
  std::size_t consumed = 0;
  for (const auto& debate : corpus) {
    for (const auto& scene : debate.scenes) {
      auto it = by_scene.find({debate.id, scene.id});
      if (it == by_scene.end()) continue;
      ++consumed;
      if (!wanted.empty() && !wanted.contains(it->first)) continue;
      auto part = pool(it->second, debate, scene);
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  if (consumed != by_scene.size()) {
    for (const auto& [key, _] : by_scene)
      if (const auto* d = find_debate(corpus, key.first); !d || !d->find_scene(key.second))
        throw Error("pool: annotation references unknown scene " + key.first + "/" + key.second);
  }
  return out;
}

// -- combination -------------------------------------------------------------

std::vector<Annotation> combine_preference(std::span<const std::string> order,
                                           std::span<const PooledPhrase> phrases,
                                           const std::set<std::string>& registered) {
  if (order.empty()) throw ConfigError("combine_preference: empty system order");
  std::set<std::string> seen;
  for (const auto& id : order) {
    if (!registered.contains(id)) throw ConfigError("combine_preference: unknown system id '" + id + "'");
    if (!seen.insert(id).second) throw ConfigError("combine_preference: duplicate system id '" + id + "'");
  }
  std::vector<Annotation> out;
  for (const auto& phrase : phrases) {
    // The winning system keeps every link it placed in the phrase.
    for (const auto& id : order) {
      const auto before = out.size();
      for (const auto& a : phrase.members)
        if (a.system_id == id && a.linked()) out.push_back(a);
      if (out.size() > before) break;
    }
  }
  return out;
}

std::vector<Annotation> combine_voting(std::span<const PooledPhrase> phrases) {
  std::vector<Annotation> out;
  for (const auto& phrase : phrases) {
    struct Tally {
      std::set<std::string> systems;
      double confidence_sum = 0.0;
      std::size_t count = 0;
      const Annotation* longest = nullptr;
    };
    std::map<std::string, Tally> tallies;
    for (const auto& a : phrase.members) {
      if (!a.linked()) continue;
      auto& t = tallies[a.uri];
      t.systems.insert(a.system_id);
      t.confidence_sum += a.confidence;
      ++t.count;
      if (!t.longest || a.end - a.start > t.longest->end - t.longest->start) t.longest = &a;
    }
    if (tallies.empty()) continue;
    // std::map iterates URIs in ascending order, so strict comparisons keep the smaller URI on ties.
    const std::string* best_uri = nullptr;
    const Tally* best = nullptr;
    for (const auto& [uri, t] : tallies) {
      if (!best) {
        best_uri = &uri;
        best = &t;
        continue;
      }
      const double mean = t.confidence_sum / static_cast<double>(t.count);
      const double best_mean = best->confidence_sum / static_cast<double>(best->count);
      if (t.systems.size() > best->systems.size() ||
          (t.systems.size() == best->systems.size() && mean > best_mean)) {
        best_uri = &uri;
        best = &t;
      }
    }
    Annotation a = *best->longest;
    a.uri = *best_uri;
    a.system_id = kVoteSystemId;
    a.confidence = best->confidence_sum / static_cast<double>(best->count);
    out.push_back(std::move(a));
  }
  return out;
}

// -- pool file ---------------------------------------------------------------

void write_pool(std::ostream& out, std::span<const PooledPhrase> phrases) {
  for (const auto& p : phrases) {
    nlohmann::ordered_json j;
    j["phrase_id"] = p.phrase_id;
    j["debate_id"] = p.debate_id;
    j["scene_id"] = p.scene_id;
    j["start"] = p.start;
    j["end"] = p.end;
    j["surface"] = p.surface;
    j["annotations"] = nlohmann::ordered_json::array();
    for (const auto& a : p.members) j["annotations"].push_back(nlohmann::ordered_json::parse(annotation_to_line(a)));
    out << j.dump() << '\n';
  }
}

void write_pool(const std::filesystem::path& path, std::span<const PooledPhrase> phrases) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write pool file '" + path.string() + "'");
  write_pool(out, phrases);
}

std::vector<PooledPhrase> parse_pool(std::istream& in) {
  std::vector<PooledPhrase> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank(line)) continue;
    auto j = detail::parse_line(line, line_no);
    try {
      constexpr std::string_view what = "pooled phrase";
      detail::check_keys(j, {"phrase_id", "debate_id", "scene_id", "start", "end", "surface", "annotations"},
                         what);
      PooledPhrase p;
      p.phrase_id = detail::require_string(j, "phrase_id", what);
      p.debate_id = detail::require_string(j, "debate_id", what);
      p.scene_id = detail::require_string(j, "scene_id", what);
      p.start = detail::require_offset(j, "start", what);
      p.end = detail::require_offset(j, "end", what);
      p.surface = detail::require_string(j, "surface", what);
      std::string members;
      for (const auto& ja : detail::require_array(j, "annotations", what)) members += ja.dump() + "\n";
      std::istringstream member_stream(members);
      p.members = parse_annotations(member_stream);
      out.push_back(std::move(p));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no, 0);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 0);
    }
  }
  return out;
}

std::vector<PooledPhrase> read_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open pool file '" + path.string() + "'");
  return parse_pool(in);
}

}  // namespace hybridel
