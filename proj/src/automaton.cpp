#include "hybridel/automaton.hpp"

#include <algorithm>
#include <deque>

#include "hybridel/error.hpp"
#include "hybridel/unicode.hpp"

namespace hybridel {

Automaton::StateId Automaton::child(StateId from, char32_t c) const {
  const auto& t = states_[from].transitions;
  auto it = std::lower_bound(t.begin(), t.end(), c,
                             [](const auto& edge, char32_t key) { return edge.first < key; });
  return it != t.end() && it->first == c ? it->second : kNoState;
}

Automaton Automaton::build(const AliasDictionary& dict) {
  if (dict.empty()) throw PreconditionError("build_automaton: empty dictionary");
  Automaton a;
  a.states_.emplace_back();

  for (std::size_t id = 0; id < dict.size(); ++id) {
    const auto& entry = dict.entry(id);
    Alias alias;
    alias.text = unicode::decode(entry.alias);
    alias.length = alias.text.size();
    alias.case_sensitive = entry.case_policy == CasePolicy::sensitive;
    if (alias.text.empty()) throw PreconditionError("build_automaton: empty alias for " + entry.uri);
    if (!alias.case_sensitive &&
        std::any_of(alias.text.begin(), alias.text.end(), unicode::fold_changes_length))
      throw PreconditionError("build_automaton: alias '" + entry.alias +
                              "' contains a character whose case folding changes length");

    StateId s = kRoot;
    for (char32_t c : unicode::fold(alias.text)) {
      StateId next = a.child(s, c);
      if (next == kNoState) {
        next = static_cast<StateId>(a.states_.size());
        State fresh;
        fresh.depth = a.states_[s].depth + 1;
        a.states_.push_back(std::move(fresh));
        auto& t = a.states_[s].transitions;
        t.insert(std::upper_bound(t.begin(), t.end(), std::make_pair(c, StateId{0}),
                                  [](const auto& x, const auto& y) { return x.first < y.first; }),
                 {c, next});
      }
      s = next;
    }
    a.states_[s].outputs.push_back(static_cast<std::uint32_t>(id));
    a.aliases_.push_back(std::move(alias));
  }

  // Breadth-first failure links; parents are finished before children.
  std::deque<StateId> queue;
  for (const auto& [c, next] : a.states_[kRoot].transitions) {
    a.states_[next].failure = kRoot;
    queue.push_back(next);
  }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (const auto& [c, next] : a.states_[s].transitions) {
      StateId f = a.states_[s].failure;
      while (f != kRoot && a.child(f, c) == kNoState) f = a.states_[f].failure;
      const StateId target = a.child(f, c);
      a.states_[next].failure = target != kNoState && target != next ? target : kRoot;
      auto& out = a.states_[next].outputs;
      const auto& inherited = a.states_[a.states_[next].failure].outputs;
      out.insert(out.end(), inherited.begin(), inherited.end());
      std::sort(out.begin(), out.end());
      queue.push_back(next);
    }
  }
  return a;
}

std::vector<RawMatch> Automaton::find_matches(std::u32string_view text, ScanStats* stats) const {
  std::vector<RawMatch> out;
  StateId s = kRoot;
  ScanStats local;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = unicode::fold(text[i]);
    StateId next;
    while ((next = child(s, c)) == kNoState && s != kRoot) {
      s = states_[s].failure;
      ++local.failure_steps;
    }
    ++local.goto_steps;
    s = next == kNoState ? kRoot : next;
    for (auto id : states_[s].outputs) {
      const auto& alias = aliases_[id];
      const std::size_t end = i + 1;
      const std::size_t start = end - alias.length;
      if (alias.case_sensitive && text.substr(start, alias.length) != alias.text) continue;
      out.push_back({start, end, id});
    }
  }
  std::sort(out.begin(), out.end());
  if (stats) *stats = local;
  return out;
}

}  // namespace hybridel
