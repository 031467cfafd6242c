#pragma once

// Deterministic stand-in for an open-domain entity linker, driven by a
// surface -> (uri, confidence) table. Two dials degrade it: `recall` drops
// matches, `precision` swaps the URI for a wrong one. Every decision is a
// pure function of (seed, debate, scene, span), so output does not depend on
// call order or threading.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hybridel/automaton.hpp"
#include "hybridel/pipeline.hpp"

namespace hybridel {

struct MockRule {
  std::string surface;
  std::string uri;
  double confidence = 1.0;
};

struct MockDials {
  double recall = 1.0;
  double precision = 1.0;
  std::uint64_t seed = 0;
};

class MockGeneralist final : public LinkerSystem {
 public:
  MockGeneralist(std::string id, std::vector<MockRule> rules, MockDials dials = {});

  const std::string& id() const override { return id_; }
  std::vector<Annotation> annotate(const Debate& debate, const Scene& scene) const override;
  std::vector<Annotation> annotate_text(std::string_view debate_id, std::string_view scene_id,
                                        std::u32string_view text) const;

 private:
  std::string id_;
  std::vector<MockRule> rules_;
  MockDials dials_;
  AliasDictionary dict_;
  Automaton automaton_;
  std::vector<std::size_t> rule_of_alias_;
};

/// Reads `surface<TAB>uri<TAB>confidence` rows.
std::vector<MockRule> load_mock_rules(const std::filesystem::path& path);
std::vector<MockRule> parse_mock_rules(std::istream& in);

}  // namespace hybridel
