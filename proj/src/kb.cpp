#include "hybridel/kb.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "hybridel/unicode.hpp"
#include "hybridel/uri.hpp"
#include "json_util.hpp"

namespace hybridel {

using detail::json;

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::party: return "party";
    case EntityKind::person: return "person";
    case EntityKind::organization: return "organization";
    case EntityKind::other: return "other";
  }
  return "other";
}

std::string_view to_string(GovRole role) { return role == GovRole::minister ? "minister" : "secretary"; }

EntityKind parse_entity_kind(std::string_view text) {
  if (text == "party") return EntityKind::party;
  if (text == "person") return EntityKind::person;
  if (text == "organization") return EntityKind::organization;
  if (text == "other") return EntityKind::other;
  throw Error("unknown entity kind '" + std::string(text) + "'");
}

GovRole parse_gov_role(std::string_view text) {
  if (text == "minister") return GovRole::minister;
  if (text == "secretary") return GovRole::secretary;
  throw Error("unknown government role '" + std::string(text) + "'");
}

// -- alias dictionary --------------------------------------------------------

namespace {

std::string describe(const std::vector<AliasConflict>& conflicts) {
  std::string out = "ambiguous alias";
  for (const auto& c : conflicts)
    out += " '" + c.alias + "' (" + c.first_uri + ", " + c.second_uri + ")";
  return out;
}

}  // namespace

AmbiguityError::AmbiguityError(std::vector<AliasConflict> conflicts)
    : Error(describe(conflicts)), conflicts_(std::move(conflicts)) {}

AliasDictionary::AliasDictionary(std::vector<AliasEntry> entries, CasePolicy default_policy)
    : default_policy_(default_policy) {
  std::sort(entries.begin(), entries.end(), [](const AliasEntry& a, const AliasEntry& b) {
    return std::tie(a.alias, a.uri, a.case_policy) < std::tie(b.alias, b.uri, b.case_policy);
  });
  // Exact duplicates collapse; the broader (insensitive) policy wins.
  for (auto& e : entries) {
    if (!entries_.empty() && entries_.back().alias == e.alias && entries_.back().uri == e.uri) continue;
    entries_.push_back(std::move(e));
  }

  std::map<std::string, std::vector<std::size_t>> by_folded;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    by_folded[unicode::fold_utf8(entries_[i].alias)].push_back(i);

  std::vector<AliasConflict> conflicts;
  for (const auto& [_, ids] : by_folded) {
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        const auto& a = entries_[ids[x]];
        const auto& b = entries_[ids[y]];
        if (a.uri == b.uri) continue;
        const bool overlap = a.case_policy == CasePolicy::insensitive ||
                             b.case_policy == CasePolicy::insensitive || a.alias == b.alias;
        if (!overlap) continue;
        auto [u1, u2] = std::minmax(a.uri, b.uri);
        conflicts.push_back({std::min(a.alias, b.alias), u1, u2});
      }
    }
  }
  if (!conflicts.empty()) {
    std::sort(conflicts.begin(), conflicts.end());
    conflicts.erase(std::unique(conflicts.begin(), conflicts.end()), conflicts.end());
    throw AmbiguityError(std::move(conflicts));
  }
}

std::optional<std::string> AliasDictionary::lookup(std::string_view alias) const {
  const auto folded = unicode::fold_utf8(alias);
  for (const auto& e : entries_) {
    if (e.alias == alias) return e.uri;
    if (e.case_policy == CasePolicy::insensitive && unicode::fold_utf8(e.alias) == folded) return e.uri;
  }
  return std::nullopt;
}

AliasDictionary build_alias_dictionary(std::span<const Entity> entities, CasePolicy policy) {
  if (entities.empty()) throw PreconditionError("build_alias_dictionary: no entities");
  std::vector<AliasEntry> entries;
  for (const auto& entity : entities)
    for (const auto& alias : entity.aliases) entries.push_back({alias, entity.uri, policy});
  return AliasDictionary(std::move(entries), policy);
}

AliasDictionary parse_dictionary(std::istream& in, CasePolicy default_policy) {
  std::vector<AliasEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::blank(line) || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t from = 0;
    for (auto tab = line.find('\t'); tab != std::string::npos; tab = line.find('\t', from)) {
      cols.push_back(line.substr(from, tab - from));
      from = tab + 1;
    }
    cols.push_back(line.substr(from));
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty())
      throw ParseError("expected 'alias<TAB>uri[<TAB>case=sensitive]'", line_no, 0);
    auto policy = default_policy;
    if (cols.size() == 3) {
      if (cols[2] == "case=sensitive")
        policy = CasePolicy::sensitive;
      else if (cols[2] == "case=insensitive")
        policy = CasePolicy::insensitive;
      else
        throw ParseError("unknown option '" + cols[2] + "'", line_no, cols[0].size() + cols[1].size() + 2);
    }
    try {
      unicode::decode(cols[0]);
    } catch (const ParseError& e) {
      throw ParseError("ill-formed UTF-8 in alias", line_no, e.offset());
    }
    entries.push_back({cols[0], cols[1], policy});
  }
  return AliasDictionary(std::move(entries), default_policy);
}

AliasDictionary load_dictionary(const std::filesystem::path& path, CasePolicy default_policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dictionary '" + path.string() + "'");
  return parse_dictionary(in, default_policy);
}

std::vector<CommonWordWarning> validate_common_words(const AliasDictionary& dict,
                                                     const std::unordered_set<std::string>& lexicon) {
  std::unordered_set<std::string> folded_lexicon;
  for (const auto& word : lexicon) folded_lexicon.insert(unicode::fold_utf8(word));
  std::vector<CommonWordWarning> out;
  for (const auto& e : dict.entries()) {
    if (e.case_policy == CasePolicy::sensitive) continue;
    if (!folded_lexicon.contains(unicode::fold_utf8(e.alias))) continue;
    out.push_back({e.alias, e.uri,
                   "alias '" + e.alias + "' (" + e.uri +
                       ") is also a common word; consider case-sensitive matching for it"});
  }
  return out;
}

std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open lexicon '" + path.string() + "'");
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!detail::blank(line)) out.insert(line);
  }
  return out;
}

// -- indices -----------------------------------------------------------------

MemberIndex::MemberIndex(std::span<const Member> members) : members_(members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    by_surname_[unicode::fold_utf8(members[i].surname)].push_back(i);
    by_full_name_[unicode::fold_utf8(members[i].entity.canonical_name)].push_back(i);
  }
}

std::vector<MemberHit> MemberIndex::query_detailed(std::string_view name, const Date& date,
                                                   std::string_view house) const {
  const auto key = unicode::fold_utf8(name);
  std::map<std::string, NameMatch> hits;
  auto collect = [&](const auto& index, NameMatch how) {
    auto it = index.find(key);
    if (it == index.end()) return;
    for (auto i : it->second) {
      const auto& member = members_[i];
      const bool sitting = std::any_of(member.memberships.begin(), member.memberships.end(),
                                       [&](const Membership& m) {
                                         return m.house == house && m.interval.contains(date);
                                       });
      if (!sitting) continue;
      auto [pos, inserted] = hits.emplace(member.entity.uri, how);
      if (!inserted && how == NameMatch::full_name) pos->second = how;
    }
  };
  collect(by_surname_, NameMatch::surname);
  collect(by_full_name_, NameMatch::full_name);
  std::vector<MemberHit> out;
  for (auto& [uri, how] : hits) out.push_back({uri, how});
  return out;
}

std::vector<std::string> MemberIndex::query(std::string_view name, const Date& date,
                                            std::string_view house) const {
  std::vector<std::string> out;
  for (auto& hit : query_detailed(name, date, house)) out.push_back(std::move(hit.uri));
  return out;
}

GovernmentIndex::GovernmentIndex(std::span<const Member> members) {
  for (const auto& member : members)
    for (const auto& pos : member.positions)
      if (pos.portfolio)
        by_office_[{pos.role, unicode::fold_utf8(*pos.portfolio)}].push_back(
            {pos.interval, member.entity.uri});
  for (auto& [_, tenures] : by_office_)
    std::sort(tenures.begin(), tenures.end(),
              [](const Tenure& a, const Tenure& b) { return a.interval.start < b.interval.start; });
}

std::vector<std::string> GovernmentIndex::query(GovRole role, std::string_view portfolio,
                                                const Date& date) const {
  auto it = by_office_.find({role, unicode::fold_utf8(portfolio)});
  if (it == by_office_.end()) return {};
  std::vector<std::string> out;
  for (const auto& tenure : it->second) {
    if (date < tenure.interval.start) break;
    if (tenure.interval.contains(date)) out.push_back(tenure.uri);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// -- knowledge base ----------------------------------------------------------

void validate_entity(const Entity& entity) {
  if (entity.uri.empty()) throw InvariantError("<entity>", "empty uri");
  if (entity.aliases.empty()) throw InvariantError(entity.uri, "no aliases");
  if (std::find(entity.aliases.begin(), entity.aliases.end(), entity.canonical_name) ==
      entity.aliases.end())
    throw InvariantError(entity.uri, "canonical_name '" + entity.canonical_name + "' is not an alias");
}

void validate_member(const Member& member) {
  validate_entity(member.entity);
  const auto& uri = member.entity.uri;
  if (member.entity.kind != EntityKind::person) throw InvariantError(uri, "member is not a person");
  for (std::size_t i = 0; i < member.memberships.size(); ++i) {
    const auto& a = member.memberships[i];
    if (!a.interval.well_ordered()) throw InvariantError(uri, "membership ends before it starts");
    for (std::size_t j = i + 1; j < member.memberships.size(); ++j) {
      const auto& b = member.memberships[j];
      if (a.house == b.house && a.interval.overlaps(b.interval))
        throw InvariantError(uri, "overlapping memberships in house '" + a.house + "'");
    }
  }
  for (const auto& pos : member.positions)
    if (!pos.interval.well_ordered()) throw InvariantError(uri, "position ends before it starts");
}

KnowledgeBase::KnowledgeBase(std::vector<Entity> entities, std::vector<Member> members)
    : entities_(std::move(entities)), members_(std::move(members)) {
  for (const auto& m : members_) {
    validate_member(m);
    if (std::none_of(entities_.begin(), entities_.end(),
                     [&](const Entity& e) { return e.uri == m.entity.uri; }))
      entities_.push_back(m.entity);
  }
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    validate_entity(entities_[i]);
    if (!entity_by_uri_.emplace(entities_[i].uri, i).second)
      throw InvariantError(entities_[i].uri, "duplicate entity uri");
    if (entities_[i].wikipedia_uri) entity_by_wikipedia_.emplace(normalize_uri(*entities_[i].wikipedia_uri), i);
  }
  for (std::size_t i = 0; i < members_.size(); ++i) member_by_uri_.emplace(members_[i].entity.uri, i);
  member_index_ = MemberIndex(members_);
  government_index_ = GovernmentIndex(members_);
}

const Entity* KnowledgeBase::find(std::string_view uri) const {
  auto it = entity_by_uri_.find(std::string(uri));
  return it == entity_by_uri_.end() ? nullptr : &entities_[it->second];
}

const Member* KnowledgeBase::find_member(std::string_view uri) const {
  auto it = member_by_uri_.find(std::string(uri));
  return it == member_by_uri_.end() ? nullptr : &members_[it->second];
}

std::optional<EntityKind> KnowledgeBase::kind_of(std::string_view uri) const {
  if (const auto* e = find(uri)) return e->kind;
  auto it = entity_by_wikipedia_.find(normalize_uri(uri));
  if (it != entity_by_wikipedia_.end()) return entities_[it->second].kind;
  return std::nullopt;
}

namespace {

Interval interval_from_json(const json& j, std::string_view what) {
  Interval interval{parse_date(detail::require_string(j, "start", what)), std::nullopt};
  if (auto end = detail::optional_string(j, "end", what)) interval.end = parse_date(*end);
  return interval;
}

}  // namespace

std::unique_ptr<KnowledgeBase> parse_kb(std::istream& in) {
  std::vector<Entity> entities;
  std::vector<Member> members;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank(line)) continue;
    auto j = detail::parse_line(line, line_no);
    try {
      detail::check_keys(j, {"uri", "kind", "canonical_name", "aliases", "wikipedia_uri", "surname",
                             "memberships", "positions"},
                         "kb record");
      Entity e;
      e.uri = detail::require_string(j, "uri", "kb record");
      const std::string what = "kb record " + e.uri;
      e.kind = parse_entity_kind(detail::require_string(j, "kind", what));
      e.canonical_name = detail::require_string(j, "canonical_name", what);
      for (const auto& a : detail::require_array(j, "aliases", what)) {
        if (!a.is_string()) throw Error(what + ": aliases must be strings");
        e.aliases.push_back(a.get<std::string>());
      }
      std::sort(e.aliases.begin(), e.aliases.end());
      e.aliases.erase(std::unique(e.aliases.begin(), e.aliases.end()), e.aliases.end());
      e.wikipedia_uri = detail::optional_string(j, "wikipedia_uri", what);

      auto surname = detail::optional_string(j, "surname", what);
      if (!surname) {
        if (j.contains("memberships") || j.contains("positions"))
          throw Error(what + ": memberships/positions require a surname");
        entities.push_back(std::move(e));
        continue;
      }
      Member m;
      m.entity = std::move(e);
      m.surname = *surname;
      if (j.contains("memberships")) {
        for (const auto& jm : detail::require_array(j, "memberships", what)) {
          detail::check_keys(jm, {"house", "start", "end"}, what + " membership");
          m.memberships.push_back({detail::require_string(jm, "house", what), interval_from_json(jm, what)});
        }
      }
      if (j.contains("positions")) {
        for (const auto& jp : detail::require_array(j, "positions", what)) {
          detail::check_keys(jp, {"role", "portfolio", "start", "end"}, what + " position");
          m.positions.push_back({parse_gov_role(detail::require_string(jp, "role", what)),
                                 detail::optional_string(jp, "portfolio", what),
                                 interval_from_json(jp, what)});
        }
      }
      members.push_back(std::move(m));
    } catch (const ParseError&) {
      throw;
    } catch (const InvariantError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 0);
    }
  }
  return std::make_unique<KnowledgeBase>(std::move(entities), std::move(members));
}

std::unique_ptr<KnowledgeBase> load_kb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open KB '" + path.string() + "'");
  return parse_kb(in);
}

}  // namespace hybridel
