#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace hybridel {

using Date = std::chrono::year_month_day;

/// Parses an ISO 8601 calendar date (YYYY-MM-DD). Throws Error on bad input.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Closed interval [start, end]; an absent end means still open.
struct Interval {
  Date start;
  std::optional<Date> end;

  bool contains(const Date& date) const { return start <= date && (!end || date <= *end); }
  bool overlaps(const Interval& other) const {
    return (!end || other.start <= *end) && (!other.end || start <= *other.end);
  }
  bool well_ordered() const { return !end || start <= *end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace hybridel
