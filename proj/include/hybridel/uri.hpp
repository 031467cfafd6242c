#pragma once

#include <string>
#include <string_view>

namespace hybridel {

/// Canonical form for comparing hand-entered and system URIs: lowercase
/// scheme and host, percent-decoding (a literal '%' stays as "%25"),
/// underscores for spaces in Wikipedia titles, no trailing slash.
/// Idempotent.
std::string normalize_uri(std::string_view uri);

/// Has a scheme followed by "://" and a non-empty host.
bool is_absolute_url(std::string_view uri);

}  // namespace hybridel
