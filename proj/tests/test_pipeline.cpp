#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace hybridel;
using namespace fixture;

namespace {

const Debate& scratch() {
  static const Debate d = make_debate("d", "2014-01-01", {{{member("pm:m", "M"), std::string(40, 'x')}}});
  return d;
}

Annotation ann(std::size_t start, std::size_t end, std::string uri, std::string system, double confidence = 1.0) {
  return {"d", "s1", start, end, std::string(end - start, 'x'), std::move(uri), std::move(system), confidence};
}

std::vector<PooledPhrase> pool_of(const std::vector<Annotation>& anns) {
  return pool(anns, scratch(), scratch().scenes[0]);
}

}  // namespace

TEST_CASE("pooling merges transitive overlaps into the longest span") {
  auto p = pool_of({ann(0, 4, "u1", "a"), ann(2, 6, "u2", "b")});
  REQUIRE(p.size() == 1);
  CHECK(p[0].start == 0);
  CHECK(p[0].end == 6);
  CHECK(p[0].members.size() == 2);
  CHECK(p[0].phrase_id == "d/s1#0");

  p = pool_of({ann(10, 14, "u", "a"), ann(0, 4, "u", "a")});
  REQUIRE(p.size() == 2);
  CHECK(p[0].start == 0);
  CHECK(p[1].start == 10);
  CHECK(p[1].phrase_id == "d/s1#1");

  p = pool_of({ann(3, 7, "u", "a"), ann(3, 7, "u", "b"), ann(3, 7, "", "c")});
  REQUIRE(p.size() == 1);
  CHECK(p[0].members.size() == 3);

  p = pool_of({ann(0, 3, "u", "a"), ann(2, 5, "u", "b"), ann(4, 8, "u", "c"), ann(8, 9, "u", "a")});
  REQUIRE(p.size() == 2);  // [0,8) chains through [2,5); [8,9) only touches
  CHECK(p[0].end == 8);
}

TEST_CASE("pooling rejects foreign or out-of-range annotations") {
  auto foreign = ann(0, 2, "u", "a");
  foreign.scene_id = "s9";
  CHECK_THROWS_AS(pool_of({foreign}), Error);
  CHECK_THROWS_AS(pool_of({ann(38, 41, "u", "a")}), Error);
  CHECK(pool_of({}).empty());
}

TEST_CASE("pool invariants on random annotations") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> start(0, 35), len(1, 5), count(0, 12);
  for (int c = 0; c < 300; ++c) {
    std::vector<Annotation> anns;
    for (std::size_t n = count(rng); n > 0; --n) {
      const auto s = start(rng);
      anns.push_back(ann(s, s + len(rng), "u", "sys" + std::to_string(n % 3)));
    }
    const auto phrases = pool_of(anns);
    std::size_t members = 0;
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      const auto& p = phrases[i];
      members += p.members.size();
      std::size_t lo = SIZE_MAX, hi = 0;
      for (const auto& m : p.members) {
        lo = std::min(lo, m.start);
        hi = std::max(hi, m.end);
      }
      CHECK(p.start == lo);
      CHECK(p.end == hi);
      if (i) CHECK(phrases[i - 1].end <= p.start);
      // no annotation outside the phrase overlaps it
      for (const auto& a : anns)
        if (a.start < p.end && p.start < a.end)
          CHECK(std::find(p.members.begin(), p.members.end(), a) != p.members.end());
    }
    CHECK(members == anns.size());
  }
}

TEST_CASE("preference combination") {
  const std::set<std::string> registered = {"spec", "gen"};
  const std::vector<std::string> order = {"spec", "gen"};
  // A: specialist only, B: both, C: generalist only, D: specialist abstains, generalist links
  const auto phrases = pool_of({ann(0, 3, "s:a", "spec"), ann(5, 8, "s:b", "spec"), ann(5, 9, "g:b", "gen"),
                                ann(12, 15, "g:c", "gen"), ann(20, 24, "", "spec"), ann(20, 23, "g:d", "gen")});
  const auto out = combine_preference(order, phrases, registered);
  REQUIRE(out.size() == 4);
  CHECK(out[0].uri == "s:a");
  CHECK(out[1].uri == "s:b");
  CHECK(out[1].end == 8);  // winner keeps its own span
  CHECK(out[2].uri == "g:c");
  CHECK(out[3].uri == "g:d");
  CHECK(out[3].system_id == "gen");

  const std::vector<std::string> reversed = {"gen", "spec"};
  CHECK(combine_preference(reversed, phrases, registered)[1].uri == "g:b");

  // Two links from the winning system in one phrase both survive.
  const auto twice = pool_of({ann(0, 3, "s:1", "spec"), ann(2, 6, "g:x", "gen"), ann(5, 8, "s:2", "spec")});
  const auto kept = combine_preference(order, twice, registered);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].uri == "s:1");
  CHECK(kept[1].uri == "s:2");

  const std::vector<std::string> none, dup = {"spec", "spec"}, unknown = {"spec", "other"};
  CHECK_THROWS_AS(combine_preference(none, phrases, registered), ConfigError);
  CHECK_THROWS_AS(combine_preference(dup, phrases, registered), ConfigError);
  CHECK_THROWS_AS(combine_preference(unknown, phrases, registered), ConfigError);
}

TEST_CASE("agreeing phrases are order-invariant") {
  std::mt19937_64 rng(8);
  const std::set<std::string> registered = {"a", "b", "c"};
  std::vector<std::string> order = {"a", "b", "c"};
  std::uniform_int_distribution<std::size_t> start(0, 35), len(1, 4);
  for (int c = 0; c < 200; ++c) {
    std::vector<Annotation> anns;
    for (const auto& s : order)
      for (int k = 0; k < 3; ++k) {
        const auto st = start(rng);
        anns.push_back(ann(st, st + len(rng), "u" + std::to_string(rng() % 2), s));
      }
    const auto phrases = pool_of(anns);
    const auto base = combine_preference(order, phrases, registered);
    std::shuffle(order.begin(), order.end(), rng);
    const auto other = combine_preference(order, phrases, registered);
    auto uris_in = [](const std::vector<Annotation>& out, const PooledPhrase& p) {
      std::set<std::string> uris;
      for (const auto& a : out)
        if (p.contains(a)) uris.insert(a.uri);
      return uris;
    };
    for (const auto& p : phrases) {
      std::set<std::string> uris;
      for (const auto& m : p.members)
        if (m.linked()) uris.insert(m.uri);
      if (uris.size() == 1) CHECK(uris_in(base, p) == uris_in(other, p));
    }
    // count monotonicity
    for (const auto& s : order) {
      std::vector<Annotation> own;
      for (const auto& a : anns)
        if (a.system_id == s) own.push_back(a);
      CHECK(base.size() >= linked_phrase_ids(own, phrases).size());
    }
  }
}

TEST_CASE("voting combination") {
  auto phrases = pool_of({ann(0, 3, "u1", "a"), ann(0, 3, "u1", "b"), ann(0, 4, "u2", "c")});
  auto out = combine_voting(phrases);
  REQUIRE(out.size() == 1);
  CHECK(out[0].uri == "u1");
  CHECK(out[0].system_id == "vote");

  phrases = pool_of({ann(0, 3, "u1", "a", 0.5), ann(0, 5, "u2", "b", 0.9)});
  out = combine_voting(phrases);
  REQUIRE(out.size() == 1);
  CHECK(out[0].uri == "u2");
  CHECK(out[0].end == 5);
  CHECK(out[0].confidence == doctest::Approx(0.9));

  phrases = pool_of({ann(0, 3, "zz", "a", 0.7), ann(0, 3, "aa", "b", 0.7)});
  CHECK(combine_voting(phrases)[0].uri == "aa");

  phrases = pool_of({ann(0, 3, "only", "a", 0.3)});
  CHECK(combine_voting(phrases)[0].uri == "only");

  phrases = pool_of({ann(0, 3, "", "a")});
  CHECK(combine_voting(phrases).empty());

  // One system repeating itself does not outvote two systems.
  phrases = pool_of({ann(0, 3, "u1", "a"), ann(1, 3, "u1", "a"), ann(0, 2, "u1", "a"), ann(0, 3, "u2", "b"),
                     ann(0, 3, "u2", "c")});
  CHECK(combine_voting(phrases)[0].uri == "u2");
}

TEST_CASE("pool file round trip") {
  const auto phrases = pool_of({ann(0, 4, "u1", "a", 0.25), ann(2, 6, "", "b"), ann(10, 12, "u3", "c")});
  std::ostringstream out;
  write_pool(out, phrases);
  std::istringstream in(out.str());
  CHECK(parse_pool(in) == phrases);
}

TEST_CASE("annotation file round trip") {
  const std::vector<Annotation> anns = {ann(0, 4, "u1", "a", 0.25), ann(2, 6, "", "role")};
  std::ostringstream out;
  write_annotations(out, anns);
  CHECK(out.str().starts_with(R"({"debate_id":"d","scene_id":"s1","start":0,"end":4,"surface":"xxxx","uri":"u1",)"
                              R"("system_id":"a","confidence":0.25})"));
  std::istringstream in(out.str());
  CHECK(parse_annotations(in) == anns);
  std::istringstream bad(R"({"debate_id":"d","scene_id":"s1","start":4,"end":4,"surface":"","uri":"u","system_id":"a","confidence":1})");
  CHECK_THROWS(parse_annotations(bad));
  std::istringstream conf(R"({"debate_id":"d","scene_id":"s1","start":0,"end":4,"surface":"x","uri":"u","system_id":"a","confidence":1.5})");
  CHECK_THROWS(parse_annotations(conf));
}

TEST_CASE("systems over the fixture corpus") {
  const auto corpus = load_corpus(data("corpus.jsonl"));
  const auto kb = load_kb(data("kb.jsonl"));
  DictionarySystem dict(load_dictionary(data("dict.tsv")));
  RoleSystem role(*kb, load_pattern_config(data("patterns.json")));
  const auto d = run_system(dict, corpus);
  CHECK(d.size() == 8);
  const auto r = run_system(role, corpus);
  CHECK(std::count_if(r.begin(), r.end(), [](const Annotation& a) { return a.linked(); }) == 11);
  CHECK(r.size() == 12);
  for (const auto& a : r) CHECK(a.system_id == "role");

  FileSystem replay("ext", d);
  CHECK(replay.id() == "ext");
  CHECK(run_system(replay, corpus).size() == d.size());
  for (const auto& a : run_system(replay, corpus)) CHECK(a.system_id == "ext");
}

TEST_CASE("mock generalist") {
  const auto corpus = load_corpus(data("corpus.jsonl"));
  const auto rules = load_mock_rules(data("mock_rules.tsv"));
  CHECK(rules.size() == 12);
  MockGeneralist perfect("mock", rules);
  const auto all = run_system(perfect, corpus);
  for (const auto& a : all) {
    CHECK(a.system_id == "mock");
    CHECK(a.uri.find("#wrong") == std::string::npos);
  }
  // NAVO x3, Brussel x2, EU, Nederland, VVD x2, PvdA x3 (one inside PvdA-fractie), CDA,
  // Jansen x4, Pietersen x2, minister x5, staatssecretaris, Financiën x2
  CHECK(all.size() == 27);

  MockGeneralist dialed("mock", rules, {0.5, 0.5, 42});
  const auto some = run_system(dialed, corpus);
  CHECK(some.size() < all.size());
  CHECK(run_system(dialed, corpus) == some);
  std::size_t wrong = 0;
  for (const auto& a : some) wrong += a.uri.ends_with("#wrong");
  CHECK(wrong > 0);
  CHECK(wrong < some.size());
  for (const auto& a : some)  // every kept match is one the perfect run also produced
    CHECK(std::any_of(all.begin(), all.end(), [&](const Annotation& b) {
      return a.start == b.start && a.end == b.end && a.scene_id == b.scene_id && a.debate_id == b.debate_id;
    }));

  MockGeneralist other_seed("mock", rules, {0.5, 0.5, 43});
  CHECK(run_system(other_seed, corpus) != some);

  // Scene order does not matter: the draws depend on the span, not on call order.
  const auto& d = corpus[1];
  const auto a = dialed.annotate(d, d.scenes[1]);
  dialed.annotate(d, d.scenes[0]);
  CHECK(dialed.annotate(d, d.scenes[1]) == a);
}
