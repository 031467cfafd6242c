#include "hybridel/mock_generalist.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <random>

#include "hybridel/dict_linker.hpp"
#include "hybridel/unicode.hpp"
#include "json_util.hpp"

namespace hybridel {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

AliasDictionary rules_dictionary(const std::vector<MockRule>& rules) {
  std::vector<AliasEntry> entries;
  for (const auto& r : rules) entries.push_back({r.surface, r.uri, CasePolicy::insensitive});
  return AliasDictionary(std::move(entries), CasePolicy::insensitive);
}

}  // namespace

MockGeneralist::MockGeneralist(std::string id, std::vector<MockRule> rules, MockDials dials)
    : id_(std::move(id)),
      rules_(std::move(rules)),
      dials_(dials),
      dict_(rules_dictionary(rules_)),
      automaton_(Automaton::build(dict_)) {
  for (const auto& e : dict_.entries()) {
    std::size_t found = 0;
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (rules_[i].surface == e.alias && rules_[i].uri == e.uri) found = i;
    rule_of_alias_.push_back(found);
  }
}

std::vector<Annotation> MockGeneralist::annotate_text(std::string_view debate_id, std::string_view scene_id,
                                                      std::u32string_view text) const {
  std::vector<Annotation> out;
  const auto matches = select_leftmost_longest(filter_token_boundaries(automaton_.find_matches(text), text));
  for (const auto& m : matches) {
    auto h = fnv1a(debate_id, dials_.seed ^ 0x9e3779b97f4a7c15ULL);
    h = fnv1a(scene_id, h);
    h = fnv1a(std::to_string(m.start) + ":" + std::to_string(m.end), h);
    std::mt19937_64 rng(h);
    if (unit_draw(rng) >= dials_.recall) continue;
    const auto& rule = rules_[rule_of_alias_[m.alias_id]];
    Annotation a;
    a.debate_id = debate_id;
    a.scene_id = scene_id;
    a.start = m.start;
    a.end = m.end;
    a.surface = unicode::encode(text.substr(m.start, m.end - m.start));
    a.uri = unit_draw(rng) >= dials_.precision ? rule.uri + "#wrong" : rule.uri;
    a.system_id = id_;
    a.confidence = rule.confidence;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Annotation> MockGeneralist::annotate(const Debate& debate, const Scene& scene) const {
  return annotate_text(debate.id, scene.id, scene_text(scene).text);
}

std::vector<MockRule> parse_mock_rules(std::istream& in) {
  std::vector<MockRule> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::blank(line) || line.front() == '#') continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError("expected 'surface<TAB>uri<TAB>confidence'", line_no, 0);
    MockRule r{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), 0.0};
    try {
      std::size_t used = 0;
      const auto conf = line.substr(t2 + 1);
      r.confidence = std::stod(conf, &used);
      if (used != conf.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("invalid confidence", line_no, t2 + 1);
    }
    if (r.surface.empty() || r.uri.empty() || r.confidence < 0.0 || r.confidence > 1.0)
      throw ParseError("empty surface/uri or confidence outside [0,1]", line_no, 0);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MockRule> load_mock_rules(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open mock rule table '" + path.string() + "'");
  return parse_mock_rules(in);
}

}  // namespace hybridel
