#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hybridel {

/// One system's link (or, with an empty uri, an unlinked candidate phrase).
/// Offsets count Unicode scalar values in the scene text.
struct Annotation {
  std::string debate_id;
  std::string scene_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string uri;
  std::string system_id;
  double confidence = 1.0;

  bool linked() const { return !uri.empty(); }
  bool overlaps(const Annotation& other) const { return start < other.end && other.start < end; }
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Orders by (debate, scene, start, end, system, uri).
bool annotation_less(const Annotation& a, const Annotation& b);

// Interchange file: JSON Lines with fields debate_id, scene_id, start, end,
// surface, uri, system_id, confidence (in that order). Unlinked candidates
// carry uri "".
std::vector<Annotation> read_annotations(const std::filesystem::path& path);
std::vector<Annotation> parse_annotations(std::istream& in);
void write_annotations(std::ostream& out, const std::vector<Annotation>& annotations);
void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& annotations);
std::string annotation_to_line(const Annotation& annotation);

}  // namespace hybridel
