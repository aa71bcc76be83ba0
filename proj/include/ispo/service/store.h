#ifndef ISPO_SERVICE_STORE_H_
#define ISPO_SERVICE_STORE_H_

#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <type_traits>

#include "ispo/curation/curation.h"

namespace ispo::service {

// A workspace with one writer and many readers. When opened on a directory
// the state is persisted as base.ispo.jsonl (canonical snapshot, written
// once) plus audit.jsonl (one event per line, flushed and fsynced before a
// mutation returns). Reopening replays the log over the snapshot.
class Store {
 public:
  static constexpr const char *kBaseFile = "base.ispo.jsonl";
  static constexpr const char *kAuditFile = "audit.jsonl";

  // In-memory store, nothing persisted.
  explicit Store(Ontology base = {});
  ~Store();
  Store(const Store &) = delete;
  Store &operator=(const Store &) = delete;

  // Creates `dir` holding `base` and an empty log. Throws IoError when the
  // directory already holds a store.
  static void Init(const std::filesystem::path &dir, const Ontology &base);
  // Throws CorruptStore when the snapshot or log cannot be loaded/replayed.
  explicit Store(const std::filesystem::path &dir);

  // Runs `fn` under a shared lock.
  template <typename Fn>
  auto Read(Fn &&fn) const {
    std::shared_lock lock = SharedLock();
    return fn(static_cast<const curation::Workspace &>(workspace_));
  }

  // Runs `fn` under the exclusive lock, then persists any events it added.
  template <typename Fn>
  auto Write(Fn &&fn) {
    std::unique_lock lock = ExclusiveLock();
    const int64_t before = workspace_.version();
    if constexpr (std::is_void_v<decltype(fn(workspace_))>) {
      fn(workspace_);
      Persist(before);
    } else {
      auto result = fn(workspace_);
      Persist(before);
      return result;
    }
  }

  int64_t version() const;
  const std::optional<std::filesystem::path> &dir() const { return dir_; }

 private:
  void Persist(int64_t since);

  // A waiting writer holds gate_, so new readers queue behind it instead of
  // starving it.
  std::shared_lock<std::shared_mutex> SharedLock() const {
    std::lock_guard gate(gate_);
    return std::shared_lock(mu_);
  }
  std::unique_lock<std::shared_mutex> ExclusiveLock() {
    std::lock_guard gate(gate_);
    return std::unique_lock(mu_);
  }

  mutable std::mutex gate_;
  mutable std::shared_mutex mu_;
  curation::Workspace workspace_;
  std::optional<std::filesystem::path> dir_;
  std::FILE *audit_ = nullptr;
};

}  // namespace ispo::service

#endif  // ISPO_SERVICE_STORE_H_
