#include "hybridel/gold.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json_util.hpp"

namespace hybridel {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::link: return "link";
    case Verdict::nil_not_in_kb: return "nil_not_in_kb";
    case Verdict::do_not_annotate: return "do_not_annotate";
  }
  return "link";
}

std::string_view to_string(Round round) { return round == Round::consensus ? "consensus" : "independent"; }

Verdict parse_verdict(std::string_view text) {
  if (text == "link") return Verdict::link;
  if (text == "nil_not_in_kb") return Verdict::nil_not_in_kb;
  if (text == "do_not_annotate") return Verdict::do_not_annotate;
  throw Error("unknown verdict '" + std::string(text) + "'");
}

Round parse_round(std::string_view text) {
  if (text == "consensus") return Round::consensus;
  if (text == "independent") return Round::independent;
  throw Error("unknown round '" + std::string(text) + "'");
}

void validate(const GoldDecision& d) {
  if (d.phrase_id.empty()) throw InvariantError("<gold>", "empty phrase_id");
  if (d.annotator_id.empty()) throw InvariantError(d.phrase_id, "empty annotator_id");
  if (d.verdict == Verdict::link && d.uris.empty())
    throw InvariantError(d.phrase_id, "link verdict requires at least one uri");
  if (d.verdict != Verdict::link && !d.uris.empty())
    throw InvariantError(d.phrase_id, std::string(to_string(d.verdict)) + " verdict must not carry uris");
  for (const auto& u : d.uris)
    if (u.empty()) throw InvariantError(d.phrase_id, "empty uri");
}

nlohmann::ordered_json to_json(const GoldDecision& d) {
  nlohmann::ordered_json j;
  j["phrase_id"] = d.phrase_id;
  j["verdict"] = to_string(d.verdict);
  j["uris"] = d.uris;
  j["annotator_id"] = d.annotator_id;
  j["round"] = to_string(d.round);
  return j;
}

GoldDecision gold_from_json(const nlohmann::json& j) {
  constexpr std::string_view what = "gold decision";
  detail::check_keys(j, {"phrase_id", "verdict", "uris", "annotator_id", "round"}, what);
  GoldDecision d;
  d.phrase_id = detail::require_string(j, "phrase_id", what);
  d.verdict = parse_verdict(detail::require_string(j, "verdict", what));
  for (const auto& u : detail::require_array(j, "uris", what)) {
    if (!u.is_string()) throw Error("gold decision: uris must be strings");
    d.uris.push_back(u.get<std::string>());
  }
  d.annotator_id = detail::require_string(j, "annotator_id", what);
  d.round = parse_round(detail::require_string(j, "round", what));
  validate(d);
  return d;
}

std::vector<GoldDecision> parse_gold(std::istream& in) {
  std::vector<GoldDecision> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank(line)) continue;
    auto j = detail::parse_line(line, line_no);
    try {
      out.push_back(gold_from_json(j));
    } catch (const InvariantError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 0);
    }
  }
  return out;
}

std::vector<GoldDecision> read_gold(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open gold file '" + path.string() + "'");
  return parse_gold(in);
}

void write_gold(std::ostream& out, std::span<const GoldDecision> decisions) {
  for (const auto& d : decisions) out << to_json(d).dump() << '\n';
}

void write_gold(const std::filesystem::path& path, std::span<const GoldDecision> decisions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write gold file '" + path.string() + "'");
  write_gold(out, decisions);
}

std::map<std::string, GoldDecision> consensus_gold(std::span<const GoldDecision> decisions) {
  std::map<std::string, GoldDecision> out;
  for (const auto& d : decisions)
    if (d.round == Round::consensus) out.insert_or_assign(d.phrase_id, d);
  return out;
}

}  // namespace hybridel
