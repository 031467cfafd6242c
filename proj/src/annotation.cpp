#include "hybridel/annotation.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "json_util.hpp"

namespace hybridel {

bool annotation_less(const Annotation& a, const Annotation& b) {
  return std::tie(a.debate_id, a.scene_id, a.start, a.end, a.system_id, a.uri) <
         std::tie(b.debate_id, b.scene_id, b.start, b.end, b.system_id, b.uri);
}

std::vector<Annotation> parse_annotations(std::istream& in) {
  std::vector<Annotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank(line)) continue;
    auto j = detail::parse_line(line, line_no);
    try {
      constexpr std::string_view what = "annotation";
      detail::check_keys(j, {"debate_id", "scene_id", "start", "end", "surface", "uri", "system_id",
                             "confidence"},
                         what);
      Annotation a;
      a.debate_id = detail::require_string(j, "debate_id", what);
      a.scene_id = detail::require_string(j, "scene_id", what);
      a.start = detail::require_offset(j, "start", what);
      a.end = detail::require_offset(j, "end", what);
      a.surface = detail::require_string(j, "surface", what);
      a.uri = detail::require_string(j, "uri", what);
      a.system_id = detail::require_string(j, "system_id", what);
      const auto& c = detail::require(j, "confidence", what);
      if (!c.is_number()) throw Error("annotation: confidence must be a number");
      a.confidence = c.get<double>();
      if (a.start >= a.end) throw Error("annotation: start must be < end");
      if (a.confidence < 0.0 || a.confidence > 1.0) throw Error("annotation: confidence outside [0,1]");
      if (a.system_id.empty()) throw Error("annotation: empty system_id");
      out.push_back(std::move(a));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 0);
    }
  }
  return out;
}

std::vector<Annotation> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open annotation file '" + path.string() + "'");
  return parse_annotations(in);
}

std::string annotation_to_line(const Annotation& a) {
  nlohmann::ordered_json j;
  j["debate_id"] = a.debate_id;
  j["scene_id"] = a.scene_id;
  j["start"] = a.start;
  j["end"] = a.end;
  j["surface"] = a.surface;
  j["uri"] = a.uri;
  j["system_id"] = a.system_id;
  j["confidence"] = a.confidence;
  return j.dump();
}

void write_annotations(std::ostream& out, const std::vector<Annotation>& annotations) {
  for (const auto& a : annotations) out << annotation_to_line(a) << '\n';
}

void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& annotations) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write annotation file '" + path.string() + "'");
  write_annotations(out, annotations);
}

}  // namespace hybridel
