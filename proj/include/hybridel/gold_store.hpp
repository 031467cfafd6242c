#pragma once

// Append-only gold decision log backing the annotation service. One writer
// at a time; readers take an immutable snapshot. Each decision is written as
// a single line with one write() followed by fsync, and a torn final line is
// dropped on open, so a crash never leaves a partial record behind.

#include <filesystem>
#include <memory>
#include <mutex>
#include <vector>

#include "hybridel/error.hpp"
#include "hybridel/gold.hpp"

namespace hybridel {

class ConflictError : public Error {
 public:
  using Error::Error;
};

class GoldStore {
 public:
  explicit GoldStore(std::filesystem::path log_path);
  ~GoldStore();
  GoldStore(const GoldStore&) = delete;
  GoldStore& operator=(const GoldStore&) = delete;

  /// Validates, normalizes URIs and appends. Throws InvariantError on a bad
  /// decision and ConflictError on a second consensus decision for a phrase.
  GoldDecision append(GoldDecision decision);

  /// The full log, in write order.
  std::shared_ptr<const std::vector<GoldDecision>> snapshot() const;

  /// Effective decisions: the latest independent decision per (phrase,
  /// annotator) and the consensus decision per phrase, in log order.
  std::vector<GoldDecision> effective() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex write_mutex_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const std::vector<GoldDecision>> log_;
};

}  // namespace hybridel
