#include "hybridel/gold_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "hybridel/uri.hpp"

namespace hybridel {

namespace {

std::string system_error(const std::string& what) { return what + ": " + std::strerror(errno); }

}  // namespace

GoldStore::GoldStore(std::filesystem::path log_path) : path_(std::move(log_path)) {
  std::vector<GoldDecision> existing;
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    const auto last_newline = content.rfind('\n');
    const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
    if (complete != content.size()) {
      content.resize(complete);
      std::filesystem::resize_file(path_, complete);
    }
    std::istringstream lines(content);
    existing = parse_gold(lines);
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw ConfigError(system_error("cannot open gold log '" + path_.string() + "'"));
  log_ = std::make_shared<const std::vector<GoldDecision>>(std::move(existing));
}

GoldStore::~GoldStore() {
  if (fd_ >= 0) ::close(fd_);
}

std::shared_ptr<const std::vector<GoldDecision>> GoldStore::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return log_;
}

GoldDecision GoldStore::append(GoldDecision decision) {
  for (auto& u : decision.uris) u = normalize_uri(u);
  validate(decision);

  std::lock_guard writer(write_mutex_);
  auto current = snapshot();
  if (decision.round == Round::consensus)
    for (const auto& d : *current)
      if (d.round == Round::consensus && d.phrase_id == decision.phrase_id)
        throw ConflictError("phrase '" + decision.phrase_id + "' already has a consensus decision");

  const std::string line = to_json(decision).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(system_error("gold log write failed"));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw Error(system_error("gold log fsync failed"));

  auto next = std::make_shared<std::vector<GoldDecision>>(*current);
  next->push_back(decision);
  std::lock_guard lock(snapshot_mutex_);
  log_ = std::move(next);
  return decision;
}

std::vector<GoldDecision> GoldStore::effective() const {
  const auto log = snapshot();
  std::map<std::pair<std::string, std::string>, std::size_t> latest_independent;
  for (std::size_t i = 0; i < log->size(); ++i) {
    const auto& d = (*log)[i];
    if (d.round == Round::independent) latest_independent[{d.phrase_id, d.annotator_id}] = i;
  }
  std::vector<GoldDecision> out;
  for (std::size_t i = 0; i < log->size(); ++i) {
    const auto& d = (*log)[i];
    if (d.round == Round::consensus || latest_independent[{d.phrase_id, d.annotator_id}] == i)
      out.push_back(d);
  }
  return out;
}

}  // namespace hybridel
