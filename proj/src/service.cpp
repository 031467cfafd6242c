#include "hybridel/service.hpp"

#include <algorithm>
#include <set>

#include "httplib.h"
#include "hybridel/evaluation.hpp"
#include "hybridel/uri.hpp"

namespace hybridel {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

HttpResponse respond(int status, const ordered_json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error(int status, const std::string& message) {
  return respond(status, ordered_json{{"error", message}});
}

}  // namespace

AnnotationService::AnnotationService(const Corpus& corpus, std::vector<SampleEntry> sample,
                                     std::vector<PooledPhrase> phrases, const KnowledgeBase& kb, GoldStore& store,
                                     std::size_t candidates_k)
    : corpus_(corpus), phrases_(std::move(phrases)), kb_(kb), store_(store) {
  if (sample.empty()) {
    for (const auto& p : phrases_) {
      auto& scenes = scenes_of_interest_[p.debate_id];
      if (std::find(scenes.begin(), scenes.end(), p.scene_id) == scenes.end()) scenes.push_back(p.scene_id);
    }
  } else {
    for (const auto& e : sample) scenes_of_interest_[e.debate_id].push_back(e.scene_id);
  }
  for (std::size_t i = 0; i < phrases_.size(); ++i) {
    phrase_index_.emplace(phrases_[i].phrase_id, i);
    candidates_.push_back(preselect_candidates(phrases_[i], kb_, candidates_k));
  }
}

HttpResponse AnnotationService::list_debates() const {
  ordered_json out = ordered_json::array();
  for (const auto& debate : corpus_) {
    auto it = scenes_of_interest_.find(debate.id);
    if (it == scenes_of_interest_.end()) continue;
    out.push_back({{"id", debate.id},
                   {"date", format_date(debate.date)},
                   {"house", debate.house},
                   {"scenes_of_interest", it->second}});
  }
  return respond(200, out);
}

HttpResponse AnnotationService::get_debate(const std::string& id) const {
  const auto* debate = find_debate(corpus_, id);
  if (!debate) return error(404, "unknown debate '" + id + "'");
  auto it = scenes_of_interest_.find(id);
  ordered_json out;
  out["debate"] = to_json(*debate);
  out["scenes_of_interest"] = it == scenes_of_interest_.end() ? ordered_json::array() : ordered_json(it->second);
  return respond(200, out);
}

HttpResponse AnnotationService::scene_phrases(const std::string& scene_id,
                                              const std::optional<std::string>& debate_id) const {
  std::set<std::string> owners;
  for (const auto& debate : corpus_)
    if ((!debate_id || debate.id == *debate_id) && debate.find_scene(scene_id)) owners.insert(debate.id);
  if (owners.empty()) return error(404, "unknown scene '" + scene_id + "'");
  if (owners.size() > 1) return error(400, "scene id '" + scene_id + "' is ambiguous; pass ?debate=");
  const auto& owner = *owners.begin();

  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < phrases_.size(); ++i) {
    const auto& p = phrases_[i];
    if (p.debate_id != owner || p.scene_id != scene_id) continue;
    ordered_json j;
    j["phrase_id"] = p.phrase_id;
    j["debate_id"] = p.debate_id;
    j["scene_id"] = p.scene_id;
    j["start"] = p.start;
    j["end"] = p.end;
    j["surface"] = p.surface;
    j["annotations"] = ordered_json::array();
    for (const auto& a : p.members) j["annotations"].push_back(ordered_json::parse(annotation_to_line(a)));
    j["candidates"] = ordered_json::array();
    for (const auto& e : candidates_[i])
      j["candidates"].push_back({{"uri", e.uri}, {"name", e.canonical_name}, {"kind", to_string(e.kind)}});
    out.push_back(std::move(j));
  }
  return respond(200, out);
}

HttpResponse AnnotationService::post_gold(const std::string& body) const {
  GoldDecision decision;
  try {
    decision = gold_from_json(json::parse(body));
  } catch (const json::exception& e) {
    return error(400, std::string("malformed decision: ") + e.what());
  } catch (const Error& e) {
    return error(400, e.what());
  }
  auto it = phrase_index_.find(decision.phrase_id);
  if (it == phrase_index_.end()) return error(404, "unknown phrase '" + decision.phrase_id + "'");

  const auto& offered = candidates_[it->second];
  for (const auto& uri : decision.uris) {
    const bool candidate = std::any_of(offered.begin(), offered.end(),
                                       [&](const Entity& e) { return normalize_uri(e.uri) == normalize_uri(uri); });
    if (!candidate && !kb_.find(uri) && !is_absolute_url(uri))
      return error(400, "uri '" + uri + "' is neither a known entity nor an absolute URL");
  }
  try {
    return respond(200, to_json(store_.append(std::move(decision))));
  } catch (const ConflictError& e) {
    return error(409, e.what());
  } catch (const InvariantError& e) {
    return error(400, e.what());
  }
}

HttpResponse AnnotationService::progress() const {
  std::map<std::pair<std::string, Round>, std::set<std::string>> decided;
  for (const auto& d : store_.effective()) decided[{d.annotator_id, d.round}].insert(d.phrase_id);
  ordered_json out = ordered_json::array();
  for (const auto& [key, phrases] : decided)
    out.push_back({{"annotator_id", key.first},
                   {"round", to_string(key.second)},
                   {"decided", phrases.size()},
                   {"total", phrases_.size()}});
  return respond(200, out);
}

HttpResponse AnnotationService::export_gold() const {
  std::string body;
  for (const auto& d : store_.effective()) body += to_json(d).dump() + "\n";
  return {200, body, "application/x-ndjson"};
}

void AnnotationService::mount(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/debates", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, list_debates());
  });
  server.Get(R"(/debates/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_debate(req.matches[1]));
  });
  server.Get(R"(/scenes/([^/]+)/phrases)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> debate;
    if (req.has_param("debate")) debate = req.get_param_value("debate");
    reply(res, scene_phrases(req.matches[1], debate));
  });
  server.Post("/gold", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, post_gold(req.body));
  });
  server.Get("/progress", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, progress());
  });
  server.Get("/export/gold", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, export_gold());
  });
}

void serve(const AnnotationService& service, const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw ConfigError("bind address must be host:port, got '" + bind + "'");
  const auto host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("invalid port in bind address '" + bind + "'");
  }
  httplib::Server server;
  service.mount(server);
  if (!server.listen(host, port)) throw Error("cannot listen on " + bind);
}

}  // namespace hybridel
