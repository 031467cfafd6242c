#pragma once

// Linker for members addressed by honorific + name ("mevrouw Jansen") or by
// government role ("de minister", "de minister van Financiën").

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridel/annotation.hpp"
#include "hybridel/corpus.hpp"
#include "hybridel/kb.hpp"

namespace hybridel {

inline constexpr std::string_view kRoleSystemId = "role";

struct RoleWord {
  std::string word;
  GovRole role;
};

/// Address-pattern configuration. Cue words match case-insensitively at token starts.
struct PatternConfig {
  std::vector<std::string> honorifics;
  std::vector<RoleWord> roles;
  std::vector<std::string> portfolio_connectors;
  std::vector<std::string> name_particles;
  std::size_t max_name_tokens = 4;
  /// Multi-word portfolios recognised as a whole before the capitalised-run fallback.
  std::vector<std::string> portfolios;
};

PatternConfig load_pattern_config(const std::filesystem::path& path);
PatternConfig parse_pattern_config(std::string_view json_text);

enum class MentionForm { honorific_name, role_only, role_with_portfolio };
std::string_view to_string(MentionForm form);

struct RoleMention {
  std::size_t start = 0;
  std::size_t end = 0;
  MentionForm form = MentionForm::role_only;
  std::string honorific_or_role;  // as written in the text
  std::optional<GovRole> role;    // set when the cue is a role word
  std::optional<std::string> name;
  std::optional<std::string> portfolio;

  friend bool operator==(const RoleMention&, const RoleMention&) = default;
};

/// Non-overlapping mentions sorted by start.
std::vector<RoleMention> detect_role_mentions(std::u32string_view text, const PatternConfig& config);

/// A resolved mention, or a speech turn (mention absent, start = end = turn start).
struct ResolvedMention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string uri;
  std::optional<RoleMention> mention;

  bool is_speech_turn() const { return !mention.has_value(); }
  friend bool operator==(const ResolvedMention&, const ResolvedMention&) = default;
};

struct SceneContext {
  Date date;
  std::string house;
  SpeakersList speakers;
  std::vector<ResolvedMention> resolved_mentions;  // ordered by start
};

/// Speaker with a matching name if exactly one, else the member index when
/// it returns exactly one member; otherwise no link.
std::optional<std::string> resolve_honorific_name(const RoleMention& mention, const SceneContext& ctx,
                                                  const KnowledgeBase& kb);

/// With a portfolio: the unique office holder on the date. Without: the
/// unique speaker holding the role, or among several the one resolved most
/// recently before the mention.
std::optional<std::string> resolve_role_mention(const RoleMention& mention, const SceneContext& ctx,
                                                const GovernmentIndex& government);

struct RoleLinkResult {
  std::vector<Annotation> links;
  std::vector<Annotation> candidates;  // detected but unresolved, uri empty
  SceneContext context;
};

/// Detects and resolves mentions left to right, threading the scene context.
/// `prefix_length`, when set, stops resolution at that text offset.
RoleLinkResult link_roles(const Debate& debate, const Scene& scene, const SpeakersList& speakers,
                          const KnowledgeBase& kb, const PatternConfig& config,
                          std::optional<std::size_t> prefix_length = std::nullopt);

}  // namespace hybridel
