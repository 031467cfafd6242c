#include "hybridel/dict_linker.hpp"

#include <algorithm>

#include "hybridel/unicode.hpp"

namespace hybridel {

std::vector<RawMatch> brute_force_matches(const AliasDictionary& dict, std::u32string_view text) {
  std::vector<RawMatch> out;
  const auto folded_text = unicode::fold(text);
  for (std::size_t id = 0; id < dict.size(); ++id) {
    const auto& entry = dict.entry(id);
    const auto alias = unicode::decode(entry.alias);
    const bool sensitive = entry.case_policy == CasePolicy::sensitive;
    const auto pattern = sensitive ? alias : unicode::fold(alias);
    const std::u32string_view haystack = sensitive ? text : std::u32string_view(folded_text);
    if (pattern.empty() || pattern.size() > haystack.size()) continue;
    for (std::size_t at = 0; at + pattern.size() <= haystack.size(); ++at)
      if (haystack.substr(at, pattern.size()) == pattern) out.push_back({at, at + pattern.size(), id});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RawMatch> filter_token_boundaries(std::vector<RawMatch> matches, std::u32string_view text) {
  std::erase_if(matches, [&](const RawMatch& m) {
    const bool glued_before = m.start > 0 && unicode::is_alnum(text[m.start - 1]);
    const bool glued_after = m.end < text.size() && unicode::is_alnum(text[m.end]);
    return glued_before || glued_after;
  });
  return matches;
}

std::vector<RawMatch> select_leftmost_longest(std::vector<RawMatch> matches) {
  std::sort(matches.begin(), matches.end(), [](const RawMatch& a, const RawMatch& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    return a.alias_id < b.alias_id;
  });
  std::vector<RawMatch> out;
  for (const auto& m : matches)
    if (out.empty() || m.start >= out.back().end) out.push_back(m);
  return out;
}

std::vector<Annotation> link_dictionary(const Automaton& automaton, const AliasDictionary& dict,
                                        std::string_view debate_id, std::string_view scene_id,
                                        std::u32string_view text) {
  auto selected =
      select_leftmost_longest(filter_token_boundaries(automaton.find_matches(text), text));
  std::vector<Annotation> out;
  out.reserve(selected.size());
  for (const auto& m : selected) {
    Annotation a;
    a.debate_id = debate_id;
    a.scene_id = scene_id;
    a.start = m.start;
    a.end = m.end;
    a.surface = unicode::encode(text.substr(m.start, m.end - m.start));
    a.uri = dict.entry(m.alias_id).uri;
    a.system_id = kDictSystemId;
    a.confidence = 1.0;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Annotation> link_dictionary(const Automaton& automaton, const AliasDictionary& dict,
                                        const Debate& debate, const Scene& scene) {
  return link_dictionary(automaton, dict, debate.id, scene.id, scene_text(scene).text);
}

}  // namespace hybridel
