#include "hybridel/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "hybridel/error.hpp"
#include "hybridel/unicode.hpp"
#include "json_util.hpp"

namespace hybridel {

using detail::json;

const Scene* Debate::find_scene(std::string_view scene_id) const {
  for (const auto& scene : scenes)
    if (scene.id == scene_id) return &scene;
  return nullptr;
}

std::string SceneText::slice(std::size_t start, std::size_t end) const {
  return unicode::encode(std::u32string_view(text).substr(start, end - start));
}

SceneText scene_text(const Scene& scene) {
  SceneText out;
  for (const auto& unit : scene.speech_units) {
    if (!out.unit_starts.empty()) out.text.push_back(U'\n');
    out.unit_starts.push_back(out.text.size());
    out.text += unicode::decode(unit.text);
  }
  return out;
}

const SpeakerRef* SpeakersList::find(std::string_view uri) const {
  for (const auto& entry : entries)
    if (entry.uri == uri) return &entry;
  return nullptr;
}

SpeakersList speakers_list(const Debate& debate) {
  SpeakersList list;
  std::unordered_set<std::string> seen;
  for (const auto& scene : debate.scenes)
    for (const auto& unit : scene.speech_units)
      if (seen.insert(unit.speaker.uri).second) list.entries.push_back(unit.speaker);
  return list;
}

// -- departments -------------------------------------------------------------

PortfolioMap::PortfolioMap(std::string none_stratum_name) : none_{std::move(none_stratum_name), true} {}

void PortfolioMap::add(const std::string& portfolio, const std::string& department) {
  if (department == none_.name)
    throw ConfigError("portfolio '" + portfolio + "' mapped to the none stratum '" + none_.name + "'");
  auto key = unicode::fold_utf8(portfolio);
  auto [it, inserted] = by_folded_portfolio_.emplace(key, DepartmentLabel{department, false});
  if (!inserted && it->second.name != department)
    throw ConfigError("portfolio '" + portfolio + "' mapped to both '" + it->second.name +
                      "' and '" + department + "'");
}

std::optional<DepartmentLabel> PortfolioMap::find(std::string_view portfolio) const {
  auto it = by_folded_portfolio_.find(unicode::fold_utf8(portfolio));
  if (it == by_folded_portfolio_.end()) return std::nullopt;
  return it->second;
}

std::set<DepartmentLabel> PortfolioMap::labels() const {
  std::set<DepartmentLabel> out{none_};
  for (const auto& [_, label] : by_folded_portfolio_) out.insert(label);
  return out;
}

DepartmentLabel PortfolioMap::label(const std::string& name) const {
  return DepartmentLabel{name, name == none_.name};
}

PortfolioMap parse_portfolio_map(std::istream& in) {
  PortfolioMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::blank(line) || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw ParseError("expected 'portfolio<TAB>department'", line_no, 0);
    auto portfolio = line.substr(0, tab);
    auto department = line.substr(tab + 1);
    if (portfolio.empty() || department.empty())
      throw ParseError("empty portfolio or department", line_no, portfolio.empty() ? 0 : tab + 1);
    try {
      map.add(portfolio, department);
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no, 0);
    }
  }
  return map;
}

PortfolioMap load_portfolio_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open portfolio map '" + path.string() + "'");
  return parse_portfolio_map(in);
}

std::set<DepartmentLabel> infer_departments(const Debate& debate, const PortfolioMap& map) {
  std::set<DepartmentLabel> out;
  std::set<std::string> unmapped;
  for (const auto& speaker : speakers_list(debate).entries) {
    if (!speaker.holds_government_position() || !speaker.portfolio) continue;
    if (auto label = map.find(*speaker.portfolio))
      out.insert(*label);
    else
      unmapped.insert(*speaker.portfolio);
  }
  if (!unmapped.empty()) {
    std::string list;
    for (const auto& p : unmapped) list += (list.empty() ? "'" : ", '") + p + "'";
    throw ConfigError("debate " + debate.id + ": unmapped portfolio(s) " + list);
  }
  if (out.empty()) out.insert(map.none_stratum());
  return out;
}

// -- validation --------------------------------------------------------------

void validate_debate(const Debate& debate) {
  if (debate.id.empty()) throw InvariantError("<debate>", "empty debate id");
  if (!debate.date.ok()) throw InvariantError(debate.id, "invalid date");
  if (debate.scenes.empty()) throw InvariantError(debate.id, "debate has no scenes");
  std::unordered_set<std::string> scene_ids;
  for (const auto& scene : debate.scenes) {
    if (!scene_ids.insert(scene.id).second)
      throw InvariantError(scene.id, "duplicate scene id in debate " + debate.id);
    if (scene.speech_units.empty())
      throw InvariantError(scene.id, "scene has no speech units");
    for (const auto& unit : scene.speech_units) {
      if (unit.speaker.uri.empty())
        throw InvariantError(unit.id, "speech unit has an empty speaker uri");
      if (const auto& role = unit.speaker.role;
          role && *role != "minister" && *role != "secretary" && *role != "member" && *role != "chair")
        throw InvariantError(unit.id, "unknown speaker role '" + *role + "'");
    }
  }
}

void validate_corpus(const Corpus& corpus) {
  std::unordered_set<std::string> ids;
  for (const auto& debate : corpus) {
    validate_debate(debate);
    if (!ids.insert(debate.id).second) throw InvariantError(debate.id, "duplicate debate id");
  }
}

const Debate* find_debate(const Corpus& corpus, std::string_view id) {
  for (const auto& debate : corpus)
    if (debate.id == id) return &debate;
  return nullptr;
}

// -- serialization -----------------------------------------------------------

namespace {

SpeakerRef speaker_from_json(const json& j) {
  detail::check_keys(j, {"uri", "display_name", "role", "portfolio"}, "speaker");
  return SpeakerRef{detail::require_string(j, "uri", "speaker"),
                    detail::require_string(j, "display_name", "speaker"),
                    detail::optional_string(j, "role", "speaker"),
                    detail::optional_string(j, "portfolio", "speaker")};
}

Debate debate_from_json(const json& j) {
  detail::check_keys(j, {"id", "date", "house", "scenes"}, "debate");
  Debate debate;
  debate.id = detail::require_string(j, "id", "debate");
  debate.date = parse_date(detail::require_string(j, "date", "debate " + debate.id));
  debate.house = detail::require_string(j, "house", "debate " + debate.id);
  for (const auto& js : detail::require_array(j, "scenes", "debate " + debate.id)) {
    detail::check_keys(js, {"id", "speech_units"}, "scene");
    Scene scene;
    scene.id = detail::require_string(js, "id", "scene");
    for (const auto& ju : detail::require_array(js, "speech_units", "scene " + scene.id)) {
      detail::check_keys(ju, {"id", "speaker", "text"}, "speech unit");
      SpeechUnit unit;
      unit.id = detail::require_string(ju, "id", "speech unit");
      unit.speaker = speaker_from_json(detail::require(ju, "speaker", "speech unit " + unit.id));
      unit.text = detail::require_string(ju, "text", "speech unit " + unit.id);
      unicode::decode(unit.text);  // rejects ill-formed UTF-8
      scene.speech_units.push_back(std::move(unit));
    }
    debate.scenes.push_back(std::move(scene));
  }
  return debate;
}

}  // namespace

nlohmann::ordered_json to_json(const Debate& debate) {
  nlohmann::ordered_json j;
  j["id"] = debate.id;
  j["date"] = format_date(debate.date);
  j["house"] = debate.house;
  j["scenes"] = nlohmann::ordered_json::array();
  for (const auto& scene : debate.scenes) {
    nlohmann::ordered_json js;
    js["id"] = scene.id;
    js["speech_units"] = nlohmann::ordered_json::array();
    for (const auto& unit : scene.speech_units) {
      nlohmann::ordered_json speaker;
      speaker["uri"] = unit.speaker.uri;
      speaker["display_name"] = unit.speaker.display_name;
      if (unit.speaker.role) speaker["role"] = *unit.speaker.role;
      if (unit.speaker.portfolio) speaker["portfolio"] = *unit.speaker.portfolio;
      js["speech_units"].push_back({{"id", unit.id}, {"speaker", speaker}, {"text", unit.text}});
    }
    j["scenes"].push_back(std::move(js));
  }
  return j;
}

namespace {

bool is_header(const json& j) { return j.is_object() && j.contains("format"); }

}  // namespace

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank(line)) continue;
    auto j = detail::parse_line(line, line_no);
    if (records++ == 0 && is_header(j)) {
      if (j.value("format", "") != "hybridel-corpus")
        throw ParseError("unknown corpus format header", line_no, 0);
      continue;
    }
    Debate debate;
    try {
      debate = debate_from_json(j);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 0);
    }
    validate_debate(debate);
    if (!ids.insert(debate.id).second) throw InvariantError(debate.id, "duplicate debate id");
    corpus.push_back(std::move(debate));
  }
  if (records == 0) throw ParseError("corpus file contains no records", line_no + 1, 0);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus '" + path.string() + "'");
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << R"({"format":"hybridel-corpus","version":1})" << '\n';
  for (const auto& debate : corpus) out << to_json(debate).dump() << '\n';
}

}  // namespace hybridel
