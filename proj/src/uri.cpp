#include "hybridel/uri.hpp"

#include <algorithm>
#include <cctype>

namespace hybridel {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    int value = -1;
    if (i + 2 < s.size()) {
      const int h = hex_value(s[i + 1]);
      const int l = hex_value(s[i + 2]);
      if (h >= 0 && l >= 0) value = h * 16 + l;
    }
    if (value < 0) {
      out += "%25";  // a bare '%'
    } else if (value == '%') {
      out += "%25";
      i += 2;
    } else {
      out.push_back(static_cast<char>(value));
      i += 2;
    }
  }
  return out;
}

bool valid_scheme(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '+' || c == '-' || c == '.';
  });
}

}  // namespace

bool is_absolute_url(std::string_view uri) {
  auto sep = uri.find("://");
  if (sep == std::string_view::npos || !valid_scheme(uri.substr(0, sep))) return false;
  auto rest = uri.substr(sep + 3);
  auto host_end = rest.find_first_of("/?#");
  return (host_end == std::string_view::npos ? rest.size() : host_end) > 0;
}

std::string normalize_uri(std::string_view uri) {
  std::string head;
  std::string_view tail = uri;
  bool wikipedia = false;

  if (auto sep = uri.find("://"); sep != std::string_view::npos && valid_scheme(uri.substr(0, sep))) {
    auto rest = uri.substr(sep + 3);
    auto host_end = std::min(rest.find_first_of("/?#"), rest.size());
    const auto host = lower(rest.substr(0, host_end));
    head = lower(uri.substr(0, sep)) + "://" + host;
    tail = rest.substr(host_end);
    wikipedia = host.ends_with("wikipedia.org");
  } else if (auto colon = uri.find(':'); colon != std::string_view::npos && valid_scheme(uri.substr(0, colon))) {
    head = lower(uri.substr(0, colon + 1));
    tail = uri.substr(colon + 1);
  }

  std::string path = percent_decode(tail);
  if (wikipedia) std::replace(path.begin(), path.end(), ' ', '_');
  std::string out = head + path;
  const std::size_t floor = head.size();
  while (out.size() > floor && out.back() == '/') out.pop_back();
  return out;
}

}  // namespace hybridel
