#include <atomic>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "support.hpp"

using namespace hybridel;
using namespace fixture;

namespace {

GoldDecision decision(std::string phrase, std::string annotator, Round round, std::vector<std::string> uris = {"pm:x"}) {
  return {std::move(phrase), Verdict::link, std::move(uris), std::move(annotator), round};
}

}  // namespace

TEST_CASE("gold records validate and round-trip") {
  CHECK_THROWS_AS(validate({"p", Verdict::link, {}, "a", Round::consensus}), InvariantError);
  CHECK_THROWS_AS(validate({"p", Verdict::nil_not_in_kb, {"u"}, "a", Round::consensus}), InvariantError);
  CHECK_THROWS_AS(validate({"", Verdict::do_not_annotate, {}, "a", Round::consensus}), InvariantError);
  CHECK_THROWS_AS(validate({"p", Verdict::do_not_annotate, {}, "", Round::consensus}), InvariantError);
  CHECK_NOTHROW(validate({"p", Verdict::nil_not_in_kb, {}, "a", Round::independent}));

  const std::vector<GoldDecision> log = {decision("p1", "a", Round::independent, {"u1", "u2"}),
                                         {"p2", Verdict::do_not_annotate, {}, "b", Round::consensus}};
  std::ostringstream out;
  write_gold(out, log);
  std::istringstream in(out.str());
  CHECK(parse_gold(in) == log);
  CHECK(gold_from_json(nlohmann::json::parse(R"({"phrase_id":"p","verdict":"link","uris":["u"],)"
                                             R"("annotator_id":"a","round":"consensus"})"))
            .uris == std::vector<std::string>{"u"});
  CHECK_THROWS(gold_from_json(nlohmann::json::parse(R"({"phrase_id":"p","verdict":"maybe","uris":[],)"
                                                    R"("annotator_id":"a","round":"consensus"})")));
}

TEST_CASE("consensus gold keeps the latest decision per phrase") {
  const std::vector<GoldDecision> log = {decision("p", "a", Round::consensus, {"u1"}),
                                         decision("p", "a", Round::independent, {"u9"}),
                                         decision("p", "b", Round::consensus, {"u2"}),
                                         decision("q", "a", Round::independent)};
  const auto c = consensus_gold(log);
  REQUIRE(c.size() == 1);
  CHECK(c.at("p").uris == std::vector<std::string>{"u2"});
}

TEST_CASE("store appends, reopens and rejects a second consensus") {
  TempDir dir;
  const auto path = dir / "gold.jsonl";
  {
    GoldStore store(path);
    CHECK(store.snapshot()->empty());
    store.append(decision("p1", "a", Round::independent));
    store.append(decision("p1", "b", Round::independent, {"pm:y"}));
    const auto normalized = store.append(decision("p1", "a", Round::consensus, {"HTTPS://nl.wikipedia.org/wiki/NAVO"}));
    CHECK(normalized.uris[0] == normalize_uri("HTTPS://nl.wikipedia.org/wiki/NAVO"));
    CHECK_THROWS_AS(store.append(decision("p1", "b", Round::consensus)), ConflictError);
    CHECK_THROWS_AS(store.append({"p2", Verdict::link, {}, "a", Round::consensus}), InvariantError);
    CHECK(store.snapshot()->size() == 3);
  }
  GoldStore again(path);
  CHECK(again.snapshot()->size() == 3);
  CHECK_THROWS_AS(again.append(decision("p1", "c", Round::consensus)), ConflictError);
  CHECK(read_gold(path).size() == 3);
}

TEST_CASE("a torn final line is dropped on open") {
  TempDir dir;
  const auto path = dir / "gold.jsonl";
  {
    GoldStore store(path);
    store.append(decision("p1", "a", Round::consensus));
    store.append(decision("p2", "a", Round::consensus));
  }
  {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out << R"({"phrase_id":"p3","verdict":"li)";
  }
  GoldStore store(path);
  CHECK(store.snapshot()->size() == 2);
  store.append(decision("p3", "a", Round::consensus));
  CHECK(read_gold(path).size() == 3);
  CHECK(slurp(path).find("\"li{") == std::string::npos);
}

TEST_CASE("effective decisions") {
  TempDir dir;
  GoldStore store(dir / "gold.jsonl");
  store.append(decision("p", "a", Round::independent, {"u1"}));
  store.append(decision("p", "b", Round::independent, {"u2"}));
  store.append(decision("p", "a", Round::independent, {"u3"}));
  store.append(decision("p", "a", Round::consensus, {"u4"}));
  const auto eff = store.effective();
  REQUIRE(eff.size() == 3);
  CHECK(eff[0].annotator_id == "b");
  CHECK(eff[1].uris == std::vector<std::string>{"u3"});
  CHECK(eff[2].round == Round::consensus);
}

TEST_CASE("concurrent appends all land as whole lines") {
  TempDir dir;
  const auto path = dir / "gold.jsonl";
  {
    GoldStore store(path);
    std::vector<std::thread> threads;
    std::atomic<int> conflicts = 0;
    for (int t = 0; t < 8; ++t)
      threads.emplace_back([&store, &conflicts, t] {
        for (int i = 0; i < 25; ++i) {
          store.append(decision("p" + std::to_string(t) + "-" + std::to_string(i), "a" + std::to_string(t),
                                Round::independent));
          try {
            store.append(decision("shared" + std::to_string(i), "a" + std::to_string(t), Round::consensus));
          } catch (const ConflictError&) {
            ++conflicts;
          }
          (void)store.snapshot()->size();
        }
      });
    for (auto& th : threads) th.join();
    CHECK(conflicts == 7 * 25);
    CHECK(store.snapshot()->size() == 8 * 25 + 25);
  }
  CHECK(read_gold(path).size() == 8 * 25 + 25);
  CHECK(consensus_gold(read_gold(path)).size() == 25);
}
