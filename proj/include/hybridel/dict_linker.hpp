#pragma once

#include <string_view>
#include <vector>

#include "hybridel/annotation.hpp"
#include "hybridel/automaton.hpp"
#include "hybridel/corpus.hpp"
#include "hybridel/kb.hpp"

namespace hybridel {

inline constexpr std::string_view kDictSystemId = "dict";

/// Reference matcher: tests every alias at every offset. Same contract as
/// Automaton::find_matches.
std::vector<RawMatch> brute_force_matches(const AliasDictionary& dict, std::u32string_view text);

/// Drops matches that start or end inside a run of letters/digits.
std::vector<RawMatch> filter_token_boundaries(std::vector<RawMatch> matches, std::u32string_view text);

/// Leftmost-longest: smallest start first, then largest end; anything
/// overlapping a chosen match is discarded. Input need not be sorted.
std::vector<RawMatch> select_leftmost_longest(std::vector<RawMatch> matches);

/// Links one scene's text with the dictionary linker.
std::vector<Annotation> link_dictionary(const Automaton& automaton, const AliasDictionary& dict,
                                        std::string_view debate_id, std::string_view scene_id,
                                        std::u32string_view text);

std::vector<Annotation> link_dictionary(const Automaton& automaton, const AliasDictionary& dict,
                                        const Debate& debate, const Scene& scene);

}  // namespace hybridel
