#pragma once

// HTTP resources for the gold-standard workbench:
//   GET  /debates               debates with their scenes of interest
//   GET  /debates/{id}          one debate record, scene of interest marked
//   GET  /scenes/{id}/phrases   pooled phrases with candidates (?debate= disambiguates)
//   POST /gold                  one gold decision
//   GET  /progress              decided phrases per annotator and round
//   GET  /export/gold           effective decisions as a gold file

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridel/corpus.hpp"
#include "hybridel/gold_store.hpp"
#include "hybridel/kb.hpp"
#include "hybridel/pipeline.hpp"
#include "hybridel/sampling.hpp"

namespace httplib {
class Server;
}

namespace hybridel {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class AnnotationService {
 public:
  /// An empty sample marks every pooled scene as a scene of interest.
  AnnotationService(const Corpus& corpus, std::vector<SampleEntry> sample, std::vector<PooledPhrase> phrases,
                    const KnowledgeBase& kb, GoldStore& store, std::size_t candidates_k = 3);

  HttpResponse list_debates() const;
  HttpResponse get_debate(const std::string& id) const;
  HttpResponse scene_phrases(const std::string& scene_id, const std::optional<std::string>& debate_id) const;
  HttpResponse post_gold(const std::string& body) const;
  HttpResponse progress() const;
  HttpResponse export_gold() const;

  void mount(httplib::Server& server) const;

 private:
  const Corpus& corpus_;
  std::vector<PooledPhrase> phrases_;
  const KnowledgeBase& kb_;
  GoldStore& store_;
  std::map<std::string, std::vector<std::string>> scenes_of_interest_;  // debate -> scene ids
  std::map<std::string, std::size_t> phrase_index_;
  std::vector<std::vector<Entity>> candidates_;
};

/// Binds `host:port` and serves until the process is stopped.
void serve(const AnnotationService& service, const std::string& bind);

}  // namespace hybridel
