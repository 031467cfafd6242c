#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hybridel {

enum class Verdict { link, nil_not_in_kb, do_not_annotate };
enum class Round { independent, consensus };

std::string_view to_string(Verdict verdict);
std::string_view to_string(Round round);
Verdict parse_verdict(std::string_view text);
Round parse_round(std::string_view text);

/// A human judgement on one pooled phrase.
struct GoldDecision {
  std::string phrase_id;
  Verdict verdict = Verdict::link;
  std::vector<std::string> uris;  // non-empty iff verdict == link
  std::string annotator_id;
  Round round = Round::consensus;

  friend bool operator==(const GoldDecision&, const GoldDecision&) = default;
};

/// Throws InvariantError naming the phrase.
void validate(const GoldDecision& decision);

nlohmann::ordered_json to_json(const GoldDecision& decision);
/// Parses and validates one record; throws Error/InvariantError.
GoldDecision gold_from_json(const nlohmann::json& j);

// Gold file: JSON Lines, one decision per line, in log order.
std::vector<GoldDecision> parse_gold(std::istream& in);
std::vector<GoldDecision> read_gold(const std::filesystem::path& path);
void write_gold(std::ostream& out, std::span<const GoldDecision> decisions);
void write_gold(const std::filesystem::path& path, std::span<const GoldDecision> decisions);

/// Latest consensus decision per phrase, by log order.
std::map<std::string, GoldDecision> consensus_gold(std::span<const GoldDecision> decisions);

}  // namespace hybridel
