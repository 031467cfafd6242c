#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hybridel/date.hpp"
#include "hybridel/error.hpp"

namespace hybridel {

enum class EntityKind { party, person, organization, other };
enum class GovRole { minister, secretary };
enum class CasePolicy { insensitive, sensitive };

std::string_view to_string(EntityKind kind);
std::string_view to_string(GovRole role);
EntityKind parse_entity_kind(std::string_view text);
GovRole parse_gov_role(std::string_view text);

struct Entity {
  std::string uri;
  EntityKind kind = EntityKind::other;
  std::string canonical_name;
  std::vector<std::string> aliases;  // sorted, unique, contains canonical_name
  std::optional<std::string> wikipedia_uri;
};

struct Membership {
  std::string house;
  Interval interval;
};

struct GovPosition {
  GovRole role = GovRole::minister;
  std::optional<std::string> portfolio;
  Interval interval;
};

struct Member {
  Entity entity;
  std::string surname;
  std::vector<Membership> memberships;
  std::vector<GovPosition> positions;
};

struct AliasEntry {
  std::string alias;
  std::string uri;
  CasePolicy case_policy = CasePolicy::insensitive;
};

/// Many-to-one alias -> URI mapping. Entries are kept sorted by (alias, uri),
/// so an alias id (entry index) is independent of input order.
class AliasDictionary {
 public:
  AliasDictionary() = default;

  /// Throws AmbiguityError if two entries can match the same text with different URIs.
  AliasDictionary(std::vector<AliasEntry> entries, CasePolicy default_policy);

  const std::vector<AliasEntry>& entries() const { return entries_; }
  const AliasEntry& entry(std::size_t alias_id) const { return entries_.at(alias_id); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  CasePolicy case_policy() const { return default_policy_; }

  /// URI for an alias under the dictionary's case rules.
  std::optional<std::string> lookup(std::string_view alias) const;

 private:
  std::vector<AliasEntry> entries_;
  CasePolicy default_policy_ = CasePolicy::insensitive;
};

struct AliasConflict {
  std::string alias;
  std::string first_uri;
  std::string second_uri;
  friend auto operator<=>(const AliasConflict&, const AliasConflict&) = default;
};

class AmbiguityError : public Error {
 public:
  explicit AmbiguityError(std::vector<AliasConflict> conflicts);
  const std::vector<AliasConflict>& conflicts() const { return conflicts_; }

 private:
  std::vector<AliasConflict> conflicts_;
};

/// Every alias of every entity. Throws PreconditionError on an empty list.
AliasDictionary build_alias_dictionary(std::span<const Entity> entities,
                                       CasePolicy policy = CasePolicy::insensitive);

/// Reads `alias<TAB>uri[<TAB>case=sensitive]` rows.
AliasDictionary load_dictionary(const std::filesystem::path& path,
                                CasePolicy default_policy = CasePolicy::insensitive);
AliasDictionary parse_dictionary(std::istream& in, CasePolicy default_policy = CasePolicy::insensitive);

struct CommonWordWarning {
  std::string alias;
  std::string uri;
  std::string message;
};

/// One warning per case-insensitive alias whose folded form is a common word.
std::vector<CommonWordWarning> validate_common_words(const AliasDictionary& dict,
                                                     const std::unordered_set<std::string>& lexicon);
std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path);

enum class NameMatch { surname, full_name };

struct MemberHit {
  std::string uri;
  NameMatch matched_on;
  friend bool operator==(const MemberHit&, const MemberHit&) = default;
};

/// Members by surname or full (canonical) name, filtered by house membership on a date.
class MemberIndex {
 public:
  MemberIndex() = default;
  explicit MemberIndex(std::span<const Member> members);

  /// Sorted by URI; a member matching on both surname and full name reports full_name.
  std::vector<MemberHit> query_detailed(std::string_view name, const Date& date,
                                        std::string_view house) const;
  std::vector<std::string> query(std::string_view name, const Date& date, std::string_view house) const;

 private:
  std::span<const Member> members_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_surname_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_full_name_;
};

/// Government office holders by (role, portfolio), filtered by tenure.
class GovernmentIndex {
 public:
  GovernmentIndex() = default;
  explicit GovernmentIndex(std::span<const Member> members);

  std::vector<std::string> query(GovRole role, std::string_view portfolio, const Date& date) const;

 private:
  struct Tenure {
    Interval interval;
    std::string uri;
  };
  std::map<std::pair<GovRole, std::string>, std::vector<Tenure>> by_office_;
};

/// Entities and members, with lookups. Immutable after construction.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(std::vector<Entity> entities, std::vector<Member> members);
  KnowledgeBase(const KnowledgeBase&) = delete;
  KnowledgeBase& operator=(const KnowledgeBase&) = delete;
  KnowledgeBase(KnowledgeBase&&) = delete;

  /// Every entity, members included.
  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Member>& members() const { return members_; }
  const Entity* find(std::string_view uri) const;
  const Member* find_member(std::string_view uri) const;
  /// Also recognises an entity by its Wikipedia URI.
  std::optional<EntityKind> kind_of(std::string_view uri) const;

  const MemberIndex& member_index() const { return member_index_; }
  const GovernmentIndex& government_index() const { return government_index_; }

 private:
  std::vector<Entity> entities_;
  std::vector<Member> members_;
  std::unordered_map<std::string, std::size_t> entity_by_uri_;
  std::unordered_map<std::string, std::size_t> member_by_uri_;
  std::unordered_map<std::string, std::size_t> entity_by_wikipedia_;  // normalized
  MemberIndex member_index_;
  GovernmentIndex government_index_;
};

/// KB file: JSON Lines, one entity per line. Records with a `surname` are members.
std::unique_ptr<KnowledgeBase> load_kb(const std::filesystem::path& path);
std::unique_ptr<KnowledgeBase> parse_kb(std::istream& in);

/// Throws InvariantError naming the uri.
void validate_entity(const Entity& entity);
void validate_member(const Member& member);

}  // namespace hybridel
