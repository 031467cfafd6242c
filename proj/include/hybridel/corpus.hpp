#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hybridel/date.hpp"
#include "json.hpp"

namespace hybridel {

struct SpeakerRef {
  std::string uri;
  std::string display_name;
  std::optional<std::string> role;  // minister | secretary | member | chair
  std::optional<std::string> portfolio;

  bool holds_government_position() const {
    return role && (*role == "minister" || *role == "secretary");
  }
  friend bool operator==(const SpeakerRef&, const SpeakerRef&) = default;
};

struct SpeechUnit {
  std::string id;
  SpeakerRef speaker;
  std::string text;  // UTF-8

  friend bool operator==(const SpeechUnit&, const SpeechUnit&) = default;
};

/// One member's speaking turn with its interruptions and replies.
struct Scene {
  std::string id;
  std::vector<SpeechUnit> speech_units;

  const SpeakerRef& principal_speaker() const { return speech_units.front().speaker; }
  friend bool operator==(const Scene&, const Scene&) = default;
};

struct Debate {
  std::string id;
  Date date;
  std::string house;
  std::vector<Scene> scenes;

  const Scene* find_scene(std::string_view scene_id) const;
  friend bool operator==(const Debate&, const Debate&) = default;
};

using Corpus = std::vector<Debate>;

/// The text a scene is linked on: speech-unit texts joined with '\n', as
/// Unicode scalar values. `unit_starts[i]` is where unit i begins.
struct SceneText {
  std::u32string text;
  std::vector<std::size_t> unit_starts;

  /// UTF-8 slice [start, end).
  std::string slice(std::size_t start, std::size_t end) const;
};

SceneText scene_text(const Scene& scene);

/// Distinct speakers in order of first appearance across all scenes.
struct SpeakersList {
  std::vector<SpeakerRef> entries;

  const SpeakerRef* find(std::string_view uri) const;
  friend bool operator==(const SpeakersList&, const SpeakersList&) = default;
};

SpeakersList speakers_list(const Debate& debate);

struct DepartmentLabel {
  std::string name;
  bool is_none_stratum = false;

  friend auto operator<=>(const DepartmentLabel&, const DepartmentLabel&) = default;
};

/// Portfolio -> department table. Lookups are case-insensitive.
class PortfolioMap {
 public:
  explicit PortfolioMap(std::string none_stratum_name = "Without department");

  /// Throws ConfigError if `portfolio` is already mapped to a different department.
  void add(const std::string& portfolio, const std::string& department);
  std::optional<DepartmentLabel> find(std::string_view portfolio) const;
  const DepartmentLabel& none_stratum() const { return none_; }
  /// Every department label, the none stratum included.
  std::set<DepartmentLabel> labels() const;
  /// Resolves a label by name; the none stratum is recognised by its name.
  DepartmentLabel label(const std::string& name) const;

 private:
  DepartmentLabel none_;
  std::map<std::string, DepartmentLabel> by_folded_portfolio_;
};

/// Reads `portfolio<TAB>department` rows. Blank lines and lines starting
/// with '#' are skipped.
PortfolioMap load_portfolio_map(const std::filesystem::path& path);
PortfolioMap parse_portfolio_map(std::istream& in);

/// One department per distinct government-speaker portfolio; the none stratum
/// when no speaker with a portfolio holds a government position.
/// Throws ConfigError listing unmapped portfolios.
std::set<DepartmentLabel> infer_departments(const Debate& debate, const PortfolioMap& map);

// Corpus file: JSON Lines, one debate record per line. An optional first
// line {"format": "hybridel-corpus", "version": 1} allows an empty corpus;
// a file with no records at all is a parse error.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in);
void write_corpus(std::ostream& out, const Corpus& corpus);
nlohmann::ordered_json to_json(const Debate& debate);

/// Throws InvariantError naming the offending id.
void validate_debate(const Debate& debate);
void validate_corpus(const Corpus& corpus);

const Debate* find_debate(const Corpus& corpus, std::string_view id);

}  // namespace hybridel
