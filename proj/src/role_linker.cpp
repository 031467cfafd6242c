#include "hybridel/role_linker.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hybridel/unicode.hpp"
#include "json_util.hpp"

namespace hybridel {

using detail::json;

std::string_view to_string(MentionForm form) {
  switch (form) {
    case MentionForm::honorific_name: return "honorific_name";
    case MentionForm::role_only: return "role_only";
    case MentionForm::role_with_portfolio: return "role_with_portfolio";
  }
  return "role_only";
}

PatternConfig parse_pattern_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, e.byte > 0 ? e.byte - 1 : 0);
  }
  constexpr std::string_view what = "pattern config";
  detail::check_keys(j, {"honorifics", "roles", "portfolio_connectors", "name_particles",
                         "max_name_tokens", "portfolios"},
                     what);
  auto strings = [&](std::string_view key, bool required) {
    std::vector<std::string> out;
    if (!required && !j.contains(key)) return out;
    for (const auto& v : detail::require_array(j, key, what)) {
      if (!v.is_string() || v.get<std::string>().empty())
        throw Error("pattern config: '" + std::string(key) + "' must hold non-empty strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  PatternConfig config;
  config.honorifics = strings("honorifics", true);
  config.portfolio_connectors = strings("portfolio_connectors", true);
  config.name_particles = strings("name_particles", true);
  config.portfolios = strings("portfolios", false);
  for (const auto& r : detail::require_array(j, "roles", what)) {
    detail::check_keys(r, {"word", "role"}, "pattern config role");
    config.roles.push_back({detail::require_string(r, "word", what),
                            parse_gov_role(detail::require_string(r, "role", what))});
  }
  const auto& max = detail::require(j, "max_name_tokens", what);
  if (!max.is_number_unsigned() || max.get<std::size_t>() == 0)
    throw Error("pattern config: max_name_tokens must be a positive integer");
  config.max_name_tokens = max.get<std::size_t>();
  return config;
}

PatternConfig load_pattern_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open pattern config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pattern_config(buf.str());
}

// -- detection ---------------------------------------------------------------

namespace {

struct Cue {
  std::u32string folded;
  std::optional<GovRole> role;
};

struct Span {
  std::size_t start;
  std::size_t end;
};

bool is_joiner(char32_t c) { return c == U'-' || c == U'\'' || c == U'’'; }
bool is_gap(char32_t c) { return c == U' ' || c == U'\t' || c == U' '; }

class Scanner {
 public:
  Scanner(std::u32string_view text, const PatternConfig& config)
      : text_(text), folded_(unicode::fold(text)), config_(config) {
    for (const auto& h : config.honorifics) cues_.push_back({unicode::fold(unicode::decode(h)), {}});
    for (const auto& r : config.roles) cues_.push_back({unicode::fold(unicode::decode(r.word)), r.role});
    // Longest cue first; on equal text a role word wins over a plain honorific.
    std::stable_sort(cues_.begin(), cues_.end(), [](const Cue& a, const Cue& b) {
      if (a.folded.size() != b.folded.size()) return a.folded.size() > b.folded.size();
      return a.role.has_value() && !b.role.has_value();
    });
    for (const auto& p : config.name_particles) particles_.insert(unicode::fold(unicode::decode(p)));
    for (const auto& c : config.portfolio_connectors)
      connectors_.insert(unicode::fold(unicode::decode(c)));
    for (const auto& p : config.portfolios) portfolios_.push_back(unicode::fold(unicode::decode(p)));
    std::sort(portfolios_.begin(), portfolios_.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }

  std::vector<RoleMention> run() {
    std::vector<RoleMention> out;
    std::size_t i = 0;
    while (i < text_.size()) {
      if (!token_start(i)) {
        ++i;
        continue;
      }
      auto mention = mention_at(i);
      if (mention) {
        i = mention->end;
        out.push_back(std::move(*mention));
      } else {
        while (i < text_.size() && unicode::is_alnum(text_[i])) ++i;
      }
    }
    return out;
  }

 private:
  bool token_start(std::size_t i) const {
    return unicode::is_alnum(text_[i]) && (i == 0 || !unicode::is_alnum(text_[i - 1]));
  }

  /// Folded phrase occurs at `at` and does not end inside a token.
  bool phrase_at(std::size_t at, const std::u32string& phrase) const {
    if (at + phrase.size() > folded_.size() || folded_.compare(at, phrase.size(), phrase) != 0) return false;
    const std::size_t end = at + phrase.size();
    return !unicode::is_alnum(phrase.back()) || end == text_.size() || !unicode::is_alnum(text_[end]);
  }

  /// Next token after at least one gap character; none if anything else intervenes.
  std::optional<Span> next_token(std::size_t pos) const {
    std::size_t s = pos;
    while (s < text_.size() && is_gap(text_[s])) ++s;
    if (s == pos || s >= text_.size() || !unicode::is_alnum(text_[s])) return std::nullopt;
    std::size_t e = s;
    while (e < text_.size()) {
      if (unicode::is_alnum(text_[e])) {
        ++e;
      } else if (is_joiner(text_[e]) && e + 1 < text_.size() && unicode::is_alnum(text_[e + 1])) {
        e += 2;
      } else {
        break;
      }
    }
    return Span{s, e};
  }

  std::u32string folded(Span t) const { return folded_.substr(t.start, t.end - t.start); }
  std::string original(std::size_t s, std::size_t e) const { return unicode::encode(text_.substr(s, e - s)); }

  /// particle* Capitalised{1,max}; particles only before the first capitalised token.
  std::optional<Span> parse_name(std::size_t pos) const {
    std::optional<std::size_t> first;
    std::size_t capitals = 0;
    std::size_t name_end = 0;
    while (capitals < config_.max_name_tokens) {
      auto tok = next_token(pos);
      if (!tok) break;
      const bool particle = particles_.contains(folded(*tok));
      if (capitals == 0 && particle) {
        if (!first) first = tok->start;
        pos = tok->end;
        continue;
      }
      if (particle || !unicode::is_capital(text_[tok->start])) break;
      if (!first) first = tok->start;
      ++capitals;
      name_end = tok->end;
      pos = tok->end;
    }
    if (capitals == 0) return std::nullopt;
    return Span{*first, name_end};
  }

  /// connector (known portfolio | Capitalised{1,max}).
  std::optional<Span> parse_portfolio(std::size_t pos) const {
    auto connector = next_token(pos);
    if (!connector || !connectors_.contains(folded(*connector))) return std::nullopt;
    std::size_t s = connector->end;
    while (s < text_.size() && is_gap(text_[s])) ++s;
    if (s == connector->end || s >= text_.size()) return std::nullopt;
    for (const auto& p : portfolios_)
      if (phrase_at(s, p)) return Span{s, s + p.size()};
    std::size_t count = 0;
    std::size_t end = 0;
    pos = connector->end;
    while (count < config_.max_name_tokens) {
      auto tok = next_token(pos);
      if (!tok || !unicode::is_capital(text_[tok->start])) break;
      ++count;
      end = tok->end;
      pos = tok->end;
    }
    if (count == 0) return std::nullopt;
    return Span{s, end};
  }

  std::optional<RoleMention> mention_at(std::size_t i) const {
    for (const auto& cue : cues_) {
      if (!phrase_at(i, cue.folded)) continue;
      const std::size_t cue_end = i + cue.folded.size();
      RoleMention m;
      m.start = i;
      m.honorific_or_role = original(i, cue_end);
      m.role = cue.role;
      if (cue.role) {
        if (auto p = parse_portfolio(cue_end)) {
          m.form = MentionForm::role_with_portfolio;
          m.portfolio = original(p->start, p->end);
          m.end = p->end;
          return m;
        }
      }
      if (auto n = parse_name(cue_end)) {
        m.form = MentionForm::honorific_name;
        m.name = original(n->start, n->end);
        m.end = n->end;
        return m;
      }
      if (cue.role) {
        m.form = MentionForm::role_only;
        m.end = cue_end;
        return m;
      }
      return std::nullopt;  // honorific without a name
    }
    return std::nullopt;
  }

  std::u32string_view text_;
  std::u32string folded_;
  const PatternConfig& config_;
  std::vector<Cue> cues_;
  std::set<std::u32string> particles_;
  std::set<std::u32string> connectors_;
  std::vector<std::u32string> portfolios_;
};

bool has_role(const SpeakerRef& speaker, GovRole role) {
  return speaker.role && *speaker.role == to_string(role);
}

}  // namespace

std::vector<RoleMention> detect_role_mentions(std::u32string_view text, const PatternConfig& config) {
  return Scanner(text, config).run();
}

// -- resolution --------------------------------------------------------------

std::optional<std::string> resolve_honorific_name(const RoleMention& mention, const SceneContext& ctx,
                                                  const KnowledgeBase& kb) {
  if (mention.form != MentionForm::honorific_name || !mention.name) return std::nullopt;
  const auto name = unicode::fold_utf8(*mention.name);

  std::set<std::string> speaker_hits;
  for (const auto& speaker : ctx.speakers.entries) {
    bool match = unicode::fold_utf8(speaker.display_name) == name;
    if (const auto* member = kb.find_member(speaker.uri)) {
      match = match || unicode::fold_utf8(member->surname) == name ||
              unicode::fold_utf8(member->entity.canonical_name) == name;
    }
    if (match) speaker_hits.insert(speaker.uri);
  }
  if (speaker_hits.size() == 1) return *speaker_hits.begin();
  if (speaker_hits.size() > 1) return std::nullopt;

  auto hits = kb.member_index().query(*mention.name, ctx.date, ctx.house);
  if (hits.size() == 1) return hits.front();
  return std::nullopt;
}

std::optional<std::string> resolve_role_mention(const RoleMention& mention, const SceneContext& ctx,
                                                const GovernmentIndex& government) {
  if (!mention.role) return std::nullopt;
  if (mention.form == MentionForm::role_with_portfolio) {
    if (!mention.portfolio) return std::nullopt;
    auto hits = government.query(*mention.role, *mention.portfolio, ctx.date);
    if (hits.size() == 1) return hits.front();
    return std::nullopt;
  }
  if (mention.form != MentionForm::role_only) return std::nullopt;

  std::vector<std::string> candidates;
  for (const auto& speaker : ctx.speakers.entries)
    if (has_role(speaker, *mention.role)) candidates.push_back(speaker.uri);
  if (candidates.empty()) return std::nullopt;
  if (candidates.size() == 1) return candidates.front();

  for (auto it = ctx.resolved_mentions.rbegin(); it != ctx.resolved_mentions.rend(); ++it) {
    const bool prior = it->is_speech_turn() ? it->start <= mention.start : it->start < mention.start;
    if (!prior) continue;
    if (std::find(candidates.begin(), candidates.end(), it->uri) != candidates.end()) return it->uri;
  }
  return std::nullopt;
}

RoleLinkResult link_roles(const Debate& debate, const Scene& scene, const SpeakersList& speakers,
                          const KnowledgeBase& kb, const PatternConfig& config,
                          std::optional<std::size_t> prefix_length) {
  const auto text = scene_text(scene);
  const std::size_t limit = prefix_length.value_or(text.text.size());
  const auto mentions = detect_role_mentions(text.text, config);

  RoleLinkResult result;
  auto& ctx = result.context;
  ctx.date = debate.date;
  ctx.house = debate.house;
  ctx.speakers = speakers;

  auto make_annotation = [&](const RoleMention& m, std::string uri) {
    Annotation a;
    a.debate_id = debate.id;
    a.scene_id = scene.id;
    a.start = m.start;
    a.end = m.end;
    a.surface = text.slice(m.start, m.end);
    a.uri = std::move(uri);
    a.system_id = kRoleSystemId;
    a.confidence = 1.0;
    return a;
  };

  std::size_t unit = 0;
  auto flush_turns = [&](std::size_t upto) {
    while (unit < text.unit_starts.size() && text.unit_starts[unit] <= upto &&
           text.unit_starts[unit] < limit) {
      const auto at = text.unit_starts[unit];
      ctx.resolved_mentions.push_back({at, at, scene.speech_units[unit].speaker.uri, std::nullopt});
      ++unit;
    }
  };

  for (const auto& m : mentions) {
    if (m.end > limit) break;
    flush_turns(m.start);
    auto uri = m.form == MentionForm::honorific_name ? resolve_honorific_name(m, ctx, kb)
                                                     : resolve_role_mention(m, ctx, kb.government_index());
    if (uri) {
      ctx.resolved_mentions.push_back({m.start, m.end, *uri, m});
      result.links.push_back(make_annotation(m, *uri));
    } else {
      result.candidates.push_back(make_annotation(m, ""));
    }
  }
  flush_turns(limit);
  return result;
}

}  // namespace hybridel
