#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridel/annotation.hpp"
#include "hybridel/automaton.hpp"
#include "hybridel/corpus.hpp"
#include "hybridel/kb.hpp"
#include "hybridel/dict_linker.hpp"
#include "hybridel/role_linker.hpp"

namespace hybridel {

/// An entity linker that annotates one scene at a time. Implementations
/// must be safe to call concurrently on different scenes.
class LinkerSystem {
 public:
  virtual ~LinkerSystem() = default;
  virtual const std::string& id() const = 0;
  /// Linked annotations plus, optionally, unlinked candidates (empty uri).
  virtual std::vector<Annotation> annotate(const Debate& debate, const Scene& scene) const = 0;
};

class DictionarySystem final : public LinkerSystem {
 public:
  explicit DictionarySystem(AliasDictionary dict, std::string id = std::string(kDictSystemId));
  const std::string& id() const override { return id_; }
  std::vector<Annotation> annotate(const Debate& debate, const Scene& scene) const override;
  const AliasDictionary& dictionary() const { return dict_; }

 private:
  std::string id_;
  AliasDictionary dict_;
  Automaton automaton_;
};

/// Role linker; emits resolved links and unresolved candidates.
class RoleSystem final : public LinkerSystem {
 public:
  RoleSystem(const KnowledgeBase& kb, PatternConfig config, std::string id = std::string(kRoleSystemId));
  const std::string& id() const override { return id_; }
  std::vector<Annotation> annotate(const Debate& debate, const Scene& scene) const override;

 private:
  std::string id_;
  const KnowledgeBase& kb_;
  PatternConfig config_;
};

/// Replays annotations from an interchange file (an external linker's output).
class FileSystem final : public LinkerSystem {
 public:
  FileSystem(std::string id, std::vector<Annotation> annotations);
  const std::string& id() const override { return id_; }
  std::vector<Annotation> annotate(const Debate& debate, const Scene& scene) const override;

 private:
  std::string id_;
  std::vector<Annotation> annotations_;
};

/// Runs a system over every scene of the corpus, in corpus order.
std::vector<Annotation> run_system(const LinkerSystem& system, const Corpus& corpus);

/// Annotations from all systems whose spans are transitively overlapping,
/// shown as one phrase with the longest span.
struct PooledPhrase {
  std::string phrase_id;
  std::string debate_id;
  std::string scene_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::vector<Annotation> members;

  bool contains(const Annotation& a) const {
    return a.debate_id == debate_id && a.scene_id == scene_id && a.start < end && start < a.end;
  }
  friend bool operator==(const PooledPhrase&, const PooledPhrase&) = default;
};

std::string make_phrase_id(std::string_view debate_id, std::string_view scene_id, std::size_t ordinal);

/// Pools one scene's annotations. Throws Error on an annotation from another scene
/// or with a span outside the scene text.
std::vector<PooledPhrase> pool(std::span<const Annotation> annotations, const Debate& debate,
                               const Scene& scene);

/// Pools a whole corpus (or only the listed scenes when `scenes` is non-empty).
std::vector<PooledPhrase> pool_corpus(std::span<const Annotation> annotations, const Corpus& corpus,
                                      std::span<const std::pair<std::string, std::string>> scenes = {});

/// Per phrase, the linked annotations of the earliest system in `order` that links it.
/// Throws ConfigError on an empty/duplicate order or an id not in `registered`.
std::vector<Annotation> combine_preference(std::span<const std::string> order,
                                           std::span<const PooledPhrase> phrases,
                                           const std::set<std::string>& registered);

inline constexpr std::string_view kVoteSystemId = "vote";

/// Per phrase, the URI backed by most systems; ties go to the higher mean
/// confidence, then the smaller URI. The longest supporting span is emitted
/// with system id "vote" and the mean confidence.
std::vector<Annotation> combine_voting(std::span<const PooledPhrase> phrases);

// Pool file: JSON Lines, one phrase per line with its member annotations.
void write_pool(std::ostream& out, std::span<const PooledPhrase> phrases);
void write_pool(const std::filesystem::path& path, std::span<const PooledPhrase> phrases);
std::vector<PooledPhrase> parse_pool(std::istream& in);
std::vector<PooledPhrase> read_pool(const std::filesystem::path& path);

}  // namespace hybridel
