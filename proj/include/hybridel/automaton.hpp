#pragma once

// Aho-Corasick automaton over the aliases of an AliasDictionary.
//
// Patterns are inserted case-folded, and the scanned text is folded one
// scalar value at a time, so a single automaton serves both case policies:
// a hit on a case-sensitive alias is kept only if the original text slice
// equals the alias exactly. Output sets are propagated along failure links
// at build time, so output(s) contains output(failure(s)).

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "hybridel/kb.hpp"

namespace hybridel {

struct RawMatch {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::size_t alias_id = 0;

  friend auto operator<=>(const RawMatch&, const RawMatch&) = default;
};

/// Transition and failure-link counters for one scan.
struct ScanStats {
  std::size_t goto_steps = 0;
  std::size_t failure_steps = 0;
};

class Automaton {
 public:
  using StateId = std::uint32_t;
  static constexpr StateId kRoot = 0;

  struct State {
    std::vector<std::pair<char32_t, StateId>> transitions;  // sorted by character
    StateId failure = kRoot;
    std::uint32_t depth = 0;
    std::vector<std::uint32_t> outputs;  // alias ids, sorted
  };

  /// Throws PreconditionError on an empty dictionary or on a
  /// case-insensitive alias whose folding would change its length.
  static Automaton build(const AliasDictionary& dict);

  /// All (start, end, alias) with text[start, end) equal to the alias under
  /// its case policy, sorted by (start, end, alias id).
  std::vector<RawMatch> find_matches(std::u32string_view text, ScanStats* stats = nullptr) const;

  std::size_t state_count() const { return states_.size(); }
  const State& state(StateId id) const { return states_.at(id); }
  /// Goto function only (no failure fallback); kNoState when absent.
  static constexpr StateId kNoState = UINT32_MAX;
  StateId child(StateId from, char32_t c) const;
  std::size_t alias_count() const { return aliases_.size(); }

 private:
  struct Alias {
    std::u32string text;  // original (unfolded)
    std::size_t length = 0;
    bool case_sensitive = false;
  };

  std::vector<State> states_;
  std::vector<Alias> aliases_;
};

}  // namespace hybridel
