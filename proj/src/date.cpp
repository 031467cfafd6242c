#include "hybridel/date.hpp"

#include <charconv>
#include <cstdio>

#include "hybridel/error.hpp"

namespace hybridel {

namespace {

int parse_field(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error("invalid date '" + std::string(whole) + "'");
  return value;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw Error("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  const Date date{std::chrono::year{parse_field(text.substr(0, 4), text)},
                  std::chrono::month{static_cast<unsigned>(parse_field(text.substr(5, 2), text))},
                  std::chrono::day{static_cast<unsigned>(parse_field(text.substr(8, 2), text))}};
  if (!date.ok()) throw Error("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

}  // namespace hybridel
