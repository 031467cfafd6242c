#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "hybridel/annotation.hpp"
#include "hybridel/corpus.hpp"
#include "hybridel/dict_linker.hpp"
#include "hybridel/evaluation.hpp"
#include "hybridel/gold.hpp"
#include "hybridel/gold_store.hpp"
#include "hybridel/service.hpp"
#include "hybridel/commands.hpp"
#include "hybridel/kb.hpp"
#include "hybridel/mock_generalist.hpp"
#include "hybridel/pipeline.hpp"
#include "hybridel/role_linker.hpp"
#include "hybridel/sampling.hpp"
#include "hybridel/unicode.hpp"
#include "hybridel/uri.hpp"

namespace fixture {

namespace fs = std::filesystem;
using namespace hybridel;

inline fs::path data(const std::string& name) { return fs::path(HYBRIDEL_TEST_DATA) / name; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    static std::size_t counter = 0;
    path_ = fs::temp_directory_path() /
            ("hybridel-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline Debate make_debate(std::string id, std::string date, std::vector<std::vector<std::pair<SpeakerRef, std::string>>> scenes,
                          std::string house = "commons") {
  Debate d{std::move(id), parse_date(date), std::move(house), {}};
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    Scene scene{"s" + std::to_string(s + 1), {}};
    for (std::size_t u = 0; u < scenes[s].size(); ++u)
      scene.speech_units.push_back({scene.id + ".u" + std::to_string(u + 1), scenes[s][u].first, scenes[s][u].second});
    d.scenes.push_back(std::move(scene));
  }
  return d;
}

inline SpeakerRef member(std::string uri, std::string name) { return {std::move(uri), std::move(name), "member", {}}; }
inline SpeakerRef minister(std::string uri, std::string name, std::string portfolio) {
  return {std::move(uri), std::move(name), "minister", std::move(portfolio)};
}

// -- gold from truth spans ---------------------------------------------------

/// Every pooled phrase overlapping a truth span is linked to the union of the
/// overlapping spans' URIs; other phrases are marked do-not-annotate.
inline std::vector<GoldDecision> gold_from_truth(const std::vector<PooledPhrase>& phrases,
                                                 const std::vector<Annotation>& truth) {
  std::vector<GoldDecision> gold;
  for (const auto& p : phrases) {
    std::set<std::string> uris;
    for (const auto& t : truth)
      if (p.contains(t)) uris.insert(t.uri);
    GoldDecision d;
    d.phrase_id = p.phrase_id;
    d.annotator_id = "truth";
    d.round = Round::consensus;
    d.verdict = uris.empty() ? Verdict::do_not_annotate : Verdict::link;
    d.uris.assign(uris.begin(), uris.end());
    gold.push_back(std::move(d));
  }
  return gold;
}

// -- exhaustive leftmost-longest oracle --------------------------------------

inline bool boundary_ok(const RawMatch& m, std::u32string_view text) {
  if (m.start > 0 && unicode::is_alnum(text[m.start - 1])) return false;
  if (m.end < text.size() && unicode::is_alnum(text[m.end])) return false;
  return true;
}

/// Enumerates every maximal non-overlapping subset of the boundary-respecting
/// matches and returns the one whose (start, -end, alias) sequence is
/// lexicographically smallest.
inline std::vector<RawMatch> exhaustive_selection(const AliasDictionary& dict, std::u32string_view text) {
  std::vector<RawMatch> ok;
  for (const auto& m : brute_force_matches(dict, text))
    if (boundary_ok(m, text)) ok.push_back(m);
  using Key = std::vector<std::tuple<std::size_t, std::ptrdiff_t, std::size_t>>;
  std::optional<Key> best;
  std::vector<RawMatch> best_set;
  std::vector<RawMatch> chosen;

  auto overlaps = [](const RawMatch& a, const RawMatch& b) { return a.start < b.end && b.start < a.end; };
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == ok.size()) {
      for (const auto& m : ok) {  // maximality
        if (std::none_of(chosen.begin(), chosen.end(), [&](const RawMatch& c) { return overlaps(c, m) || c == m; }))
          return;
      }
      auto sorted = chosen;
      std::sort(sorted.begin(), sorted.end(), [](const RawMatch& a, const RawMatch& b) {
        return std::tuple(a.start, -static_cast<std::ptrdiff_t>(a.end), a.alias_id) <
               std::tuple(b.start, -static_cast<std::ptrdiff_t>(b.end), b.alias_id);
      });
      Key key;
      for (const auto& m : sorted) key.emplace_back(m.start, -static_cast<std::ptrdiff_t>(m.end), m.alias_id);
      if (!best || key < *best) {
        best = key;
        best_set = sorted;
      }
      return;
    }
    if (std::none_of(chosen.begin(), chosen.end(), [&](const RawMatch& c) { return overlaps(c, ok[i]); })) {
      chosen.push_back(ok[i]);
      self(self, i + 1);
      chosen.pop_back();
    }
    self(self, i + 1);
  };
  recurse(recurse, 0);
  return best_set;
}

// -- random dictionaries -----------------------------------------------------

inline std::string random_string(std::mt19937_64& rng, std::string_view alphabet, std::size_t min_len,
                                 std::size_t max_len) {
  const auto chars = unicode::decode(alphabet);
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, chars.size() - 1);
  std::u32string s;
  for (std::size_t n = len(rng); s.size() < n;) s.push_back(chars[pick(rng)]);
  return unicode::encode(s);
}

/// Aliases over `alphabet`; URIs are per folded alias so no two entries conflict.
/// About a third of the entries are case-sensitive.
inline AliasDictionary random_dictionary(std::mt19937_64& rng, std::size_t max_aliases, std::string_view alphabet,
                                         std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> count(1, max_aliases);
  std::bernoulli_distribution sensitive(1.0 / 3.0);
  std::set<std::string> seen;
  std::vector<AliasEntry> entries;
  for (std::size_t n = count(rng), tries = 0; entries.size() < n && tries < 10 * n; ++tries) {
    auto alias = random_string(rng, alphabet, 1, max_len);
    if (!seen.insert(alias).second) continue;
    entries.push_back({alias, "u:" + unicode::fold_utf8(alias),
                       sensitive(rng) ? CasePolicy::sensitive : CasePolicy::insensitive});
  }
  return AliasDictionary(std::move(entries), CasePolicy::insensitive);
}

// -- evaluation truth table --------------------------------------------------

/// Per-phrase truth table, written independently of the library scorer.
inline Counts evaluate_oracle(const std::vector<Annotation>& system, const std::vector<GoldDecision>& gold,
                              const std::vector<PooledPhrase>& phrases) {
  Counts c;
  for (const auto& p : phrases) {
    const GoldDecision* latest = nullptr;
    for (const auto& g : gold)
      if (g.phrase_id == p.phrase_id && g.round == Round::consensus) latest = &g;
    if (!latest) continue;
    std::set<std::string> predicted;
    for (const auto& a : system) {
      if (a.uri.empty() || !p.contains(a)) continue;
      // an annotation belongs to the first phrase it overlaps
      const PooledPhrase* first = nullptr;
      for (const auto& q : phrases)
        if (q.contains(a)) {
          first = &q;
          break;
        }
      if (first == &p) predicted.insert(normalize_uri(a.uri));
    }
    std::set<std::string> accepted;
    for (const auto& u : latest->uris) accepted.insert(normalize_uri(u));
    bool hit = false;
    for (const auto& u : predicted) hit = hit || accepted.contains(u);
    if (latest->verdict == Verdict::link) {
      if (hit) {
        ++c.tp;
      } else {
        c.fp += predicted.size();
        ++c.fn;
      }
    } else {
      c.fp += predicted.size();
    }
  }
  return c;
}

// -- role-resolution pack ----------------------------------------------------

struct RoleExpectation {
  std::string debate;
  std::string scene;
  std::string what;
  /// (surface, uri) in text order; an empty uri is an abstention.
  std::vector<std::pair<std::string, std::string>> mentions;
};

inline const std::vector<RoleExpectation>& role_pack_expectations() {
  static const std::vector<RoleExpectation> pack = {
      {"r01", "s1", "speaker present: sole minister, sole Jansen among speakers",
       {{"minister", "pm:member/dijkstra"}, {"mevrouw Jansen", "pm:member/jansen-a"}}},
      {"r02", "s1", "index unique: one Pietersen sits on the date", {{"de heer Pietersen", "pm:member/pietersen"}}},
      {"r03", "s1", "index ambiguous: two Jansens sit on the date", {{"de heer Jansen", ""}}},
      {"r04", "s1", "index unique after the second Jansen left", {{"de heer Jansen", "pm:member/jansen-a"}}},
      {"r05", "s1", "ex-member is not in the dated index", {{"De heer Zalm", ""}}},
      {"r06", "s1", "portfolio lookup", {{"minister van Financiën", "pm:member/dijkstra"}}},
      {"r07", "s1", "multi-word portfolio lookup", {{"minister van Buitenlandse Zaken", "pm:member/timmer"}}},
      {"r08", "s1", "portfolio with two office holders", {{"minister van Onderwijs", ""}}},
      {"r09", "s1", "secretary and minister by portfolio",
       {{"staatssecretaris van Financiën", "pm:member/wiersma"}, {"minister van Defensie", "pm:member/hendriks"}}},
      {"r10", "s1", "tenure ended; no secretary among speakers",
       {{"staatssecretaris van Financiën", ""}, {"staatssecretaris", ""}}},
      {"r11", "s1", "last mentioned by name",
       {{"minister Hendriks", "pm:member/hendriks"}, {"minister", "pm:member/hendriks"}}},
      {"r11", "s2", "last mentioned by portfolio, after another minister's turn",
       {{"minister van Defensie", "pm:member/hendriks"}, {"minister", "pm:member/hendriks"}}},
      {"r11", "s3", "last mentioned by speech turn", {{"minister", "pm:member/dijkstra"}}},
      {"r11", "s4", "two ministers, none mentioned before", {{"minister", ""}}},
      {"r12", "s1", "no mentions", {}},
      {"r13", "s1", "honorific without a name-shaped token", {}},
      {"r14", "s1", "name with a leading particle", {{"mevrouw de Vries", "pm:member/de-vries"}}},
      {"r15", "s1", "name capture stops before the party affiliation", {{"de heer Jansen", "pm:member/jansen-a"}}},
      {"r16", "s1", "full name; minister without a seat",
       {{"mevrouw Anna Jansen", "pm:member/jansen-a"}, {"collega Dijkstra", ""}}},
  };
  return pack;
}

struct RoleOutcome {
  std::string surface;
  std::string uri;
  std::size_t start;
  std::size_t end;
};

/// Links and abstentions of one scene, merged in text order.
inline std::vector<RoleOutcome> role_outcomes(const RoleLinkResult& r) {
  std::vector<RoleOutcome> out;
  for (const auto* list : {&r.links, &r.candidates})
    for (const auto& a : *list) out.push_back({a.surface, a.uri, a.start, a.end});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  return out;
}

// -- Table 1 -----------------------------------------------------------------

struct Table1Row {
  std::string department;
  std::size_t scenes, phrases, persons, organizations;
};

inline const std::vector<Table1Row>& table1() {
  static const std::vector<Table1Row> rows = {
      {"Economic Affairs", 4, 97, 29, 10},
      {"Security and Justice", 4, 90, 31, 7},
      {"Infrastructure and the Environ.", 4, 79, 41, 14},
      {"Without department", 4, 72, 33, 16},
      {"Social Affairs and Employment", 4, 61, 32, 10},
      {"Interior and Kingdom Relations", 4, 57, 17, 11},
      {"Finance", 4, 53, 30, 1},
      {"Foreign Affairs", 3, 51, 7, 5},
      {"Education, Culture and Science", 2, 43, 16, 7},
      {"Health, Welfare and Sport", 4, 32, 19, 1},
      {"General Affairs", 3, 32, 11, 5},
      {"Defense", 3, 15, 5, 4},
  };
  return rows;
}

/// Ten debates per sampled scene in each department, so proportional quotas
/// reproduce the table's scene column. Every debate has three scenes.
inline Corpus table1_corpus(PortfolioMap& map) {
  Corpus corpus;
  std::size_t n = 0;
  for (const auto& row : table1()) {
    const bool none = row.department == "Without department";
    if (!none) map.add(row.department, row.department);
    for (std::size_t i = 0; i < 10 * row.scenes; ++i, ++n) {
      const auto speaker = none ? member("pm:member/m" + std::to_string(n % 7), "Lid " + std::to_string(n % 7))
                                : minister("pm:member/gov-" + std::to_string(&row - table1().data()),
                                           "Bewindspersoon", row.department);
      corpus.push_back(make_debate("t1." + std::to_string(n), "2013-01-15",
                                   {{{speaker, "Voorzitter."}}, {{speaker, "Dank u."}}, {{speaker, "Tot slot."}}}));
    }
  }
  return corpus;
}

/// Pooled phrases and consensus gold shaped to a row per stratum: `phrases`
/// phrases spread over the stratum's sampled scenes, the first `persons`
/// linked to a person, the next `organizations` to a party or organization,
/// the rest nil or linked to other entities.
inline std::pair<std::vector<PooledPhrase>, std::vector<GoldDecision>> table1_pool(
    const std::vector<SampleEntry>& sample) {
  std::vector<PooledPhrase> phrases;
  std::vector<GoldDecision> gold;
  for (const auto& row : table1()) {
    std::vector<const SampleEntry*> scenes;
    for (const auto& e : sample)
      if (e.department.name == row.department) scenes.push_back(&e);
    if (scenes.empty()) continue;
    for (std::size_t i = 0; i < row.phrases; ++i) {
      const auto& e = *scenes[i % scenes.size()];
      PooledPhrase p;
      p.debate_id = e.debate_id;
      p.scene_id = e.scene_id;
      p.phrase_id = make_phrase_id(e.debate_id, e.scene_id, i);
      p.start = i;
      p.end = i + 1;
      GoldDecision d{p.phrase_id, Verdict::link, {}, "a1", Round::consensus};
      if (i < row.persons)
        d.uris = {"kind:person/" + std::to_string(i)};
      else if (i < row.persons + row.organizations)
        d.uris = {(i % 2 ? "kind:party/" : "kind:organization/") + std::to_string(i)};
      else if (i % 3 == 0)
        d.verdict = Verdict::nil_not_in_kb;
      else
        d.uris = {"kind:other/" + std::to_string(i)};
      phrases.push_back(std::move(p));
      gold.push_back(std::move(d));
    }
  }
  return {phrases, gold};
}

inline std::optional<EntityKind> table1_kinds(std::string_view uri) {
  if (uri.starts_with("kind:person/")) return EntityKind::person;
  if (uri.starts_with("kind:party/")) return EntityKind::party;
  if (uri.starts_with("kind:organization/")) return EntityKind::organization;
  if (uri.starts_with("kind:other/")) return EntityKind::other;
  return std::nullopt;
}

// -- hybrid end-to-end -------------------------------------------------------

struct HybridRun {
  std::vector<PooledPhrase> phrases;
  std::vector<GoldDecision> gold;
  std::map<std::string, std::vector<Annotation>> outputs;  // dict, role, mock, specialists, combined
  std::map<std::string, EvalReport> reports;
};

inline HybridRun run_hybrid(const MockDials& dials) {
  HybridRun run;
  const auto corpus = load_corpus(data("corpus.jsonl"));
  const auto kb = load_kb(data("kb.jsonl"));
  DictionarySystem dict(load_dictionary(data("dict.tsv")));
  RoleSystem role(*kb, load_pattern_config(data("patterns.json")));
  MockGeneralist mock("mock", load_mock_rules(data("mock_rules.tsv")), dials);

  std::vector<Annotation> all;
  for (const LinkerSystem* s : std::initializer_list<const LinkerSystem*>{&dict, &role, &mock}) {
    auto out = run_system(*s, corpus);
    all.insert(all.end(), out.begin(), out.end());
    run.outputs[s->id()] = std::move(out);
  }
  run.phrases = pool_corpus(all, corpus);
  run.gold = gold_from_truth(run.phrases, read_annotations(data("truth.jsonl")));

  const std::set<std::string> registered = {"dict", "role", "mock"};
  const std::vector<std::string> specialists = {"dict", "role"};
  const std::vector<std::string> combined = {"dict", "role", "mock"};
  run.outputs["specialists"] = combine_preference(specialists, run.phrases, registered);
  run.outputs["combined"] = combine_preference(combined, run.phrases, registered);
  run.outputs["vote"] = combine_voting(run.phrases);

  const KindLookup kinds = [&kb](std::string_view uri) { return kb->kind_of(uri); };
  for (const auto& [name, anns] : run.outputs) run.reports[name] = evaluate(anns, run.gold, run.phrases, kinds);
  return run;
}

}  // namespace fixture
